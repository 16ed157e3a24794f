#include <circumnav/guidance.hpp>

#include <circumnav/estimator.hpp>
#include <circumnav/geometry.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"

using namespace circumnav;

namespace {
GuidanceParams sec5() {
    return make_guidance_params(10.0, 0.2, 1.0);
}
}  // namespace

TEST_CASE("compute_r_a: aim radius") {
    CHECK(std::fabs(compute_r_a(10.0, 0.2) - 8.6603) <= 5e-5);
    CHECK(compute_r_a(10.0, 0.2) == doctest::Approx(std::sqrt(75.0)).epsilon(1e-15));
    CHECK(compute_r_a(2.0, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(compute_r_a(10.0, 0.1), InvalidGain);   // k = 1/r_d exactly
    CHECK_THROWS_AS(compute_r_a(10.0, 0.05), InvalidGain);  // k < 1/r_d
    CHECK_THROWS_AS(compute_r_a(-1.0, 0.2), InvalidGain);
    CHECK_THROWS_AS(compute_r_a(10.0, -0.2), InvalidGain);
}

TEST_CASE("stable_radius: orbit radius from aim radius") {
    CHECK(stable_radius(8.6603, 0.2) == doctest::Approx(10.0).epsilon(1e-5));
    CHECK(stable_radius(0.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(stable_radius(3.0, 0.25) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("stable_radius inverts compute_r_a") {
    auto gen = oracles::rng(404);
    for (int i = 0; i < 300; ++i) {
        const double r_d = oracles::uniform(gen, 0.5, 50.0);
        const double k = oracles::uniform(gen, 1.001, 8.0) / r_d;
        CHECK(stable_radius(compute_r_a(r_d, k), k) == doctest::Approx(r_d).epsilon(1e-12));
    }
}

TEST_CASE("full_information_control: equilibrium and switching surface") {
    const GuidanceParams g = sec5();
    SUBCASE("on the settled orbit the command is -V/r_d, turning clockwise") {
        const ControlDecision d = full_information_control(g.r_d, 0.0, g);
        CHECK(d.branch == ControlBranch::Active);
        CHECK(d.omega == doctest::Approx(-g.V / g.r_d).epsilon(1e-12));
        CHECK(d.omega == doctest::Approx(-0.1000).epsilon(1e-5));
        CHECK(d.omega < 0.0);
    }
    SUBCASE("exactly on the aim circle the reference term vanishes") {
        const ControlDecision d = full_information_control(g.r_a, 0.0, g);
        CHECK(d.branch == ControlBranch::Active);
        CHECK(d.omega == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("inside the aim circle the UAV coasts") {
        const ControlDecision d = full_information_control(g.r_a / 2.0, 0.7, g);
        CHECK(d.branch == ControlBranch::Coast);
        CHECK(d.omega == 0.0);
    }
}

TEST_CASE("control magnitude is bounded by 2kV for admissible range rates") {
    auto gen = oracles::rng(505);
    for (int i = 0; i < 2000; ++i) {
        const double r_d = oracles::uniform(gen, 1.0, 40.0);
        const double k = oracles::uniform(gen, 1.01, 6.0) / r_d;
        const double V = oracles::uniform(gen, 0.2, 5.0);
        const GuidanceParams g = make_guidance_params(r_d, k, V);
        const double r = oracles::uniform(gen, 0.0, 3.0 * r_d);
        const double r_dot = oracles::uniform(gen, -V, V);
        const ControlDecision d = full_information_control(r, r_dot, g);
        CHECK(std::fabs(d.omega) <= 2.0 * k * V + 1e-12);
    }
}

TEST_CASE("control is continuous on the active branch, discontinuous at the surface") {
    const GuidanceParams g = sec5();
    const double r_dot = -0.4;
    // Approaching the surface from outside the command tends to -k*r_dot...
    const double just_outside = full_information_control(g.r_a * (1.0 + 1e-9), r_dot, g).omega;
    CHECK(just_outside == doctest::Approx(-g.k * r_dot).epsilon(1e-3));
    // ...while the inside value is 0: the only jump is at the surface.
    CHECK(full_information_control(g.r_a * (1.0 - 1e-12), r_dot, g).omega == 0.0);
    // Small perturbations on the active branch move the command smoothly.
    const double w1 = full_information_control(12.0, r_dot, g).omega;
    const double w2 = full_information_control(12.0 + 1e-8, r_dot + 1e-8, g).omega;
    CHECK(std::fabs(w1 - w2) < 1e-6);
}

TEST_CASE("output_feedback_control is the same map evaluated at the estimate") {
    const GuidanceParams g = sec5();
    auto gen = oracles::rng(606);
    for (int i = 0; i < 200; ++i) {
        const double r = oracles::uniform(gen, 0.0, 30.0);
        const double rate = oracles::uniform(gen, -2.0, 2.0);
        const ControlDecision a = output_feedback_control(r, rate, g);
        const ControlDecision b = full_information_control(r, rate, g);
        CHECK(a.omega == b.omega);
        CHECK(a.branch == b.branch);
    }
    // Spot value: direct formula evaluation.
    const double expected = 0.2 * (std::cos(kPi - std::asin(8.6603 / 12.0)) - 0.3);
    CHECK(output_feedback_control(12.0, 0.3, sec5()).omega ==
          doctest::Approx(expected).epsilon(1e-5));
    CHECK(output_feedback_control(4.0, 0.3, g).branch == ControlBranch::Coast);
}

TEST_CASE("validate_gains: full-information conditions") {
    CHECK(validate_gains(10.0, 0.2, 1.0).all_passed());
    const ValidationReport bad = validate_gains(10.0, 0.05, 1.0);
    CHECK_FALSE(bad.all_passed());
    CHECK(bad.hard_failure());
    CHECK_FALSE(validate_gains(10.0, 0.2, -1.0).all_passed());
    CHECK_FALSE(validate_gains(-10.0, 0.2, 1.0).all_passed());
}

TEST_CASE("validate_gains: output-feedback conditions at the benchmark gains") {
    const EstimatorParams est{2.0, 1.2, 0.1, ResetRadius::AimRadius, {}, {}};
    const ValidationReport rep = validate_gains(10.0, 0.2, 1.0, est);
    CHECK(rep.all_passed());
    CHECK_FALSE(rep.hard_failure());

    // Oracle: evaluate the k2 threshold from scratch.
    const double r_a = std::sqrt(10.0 * 10.0 - 1.0 / (0.2 * 0.2));
    const double delta1 = 1.0 * (2.0 * 0.2 + 1.0 / r_a);
    const double threshold = std::max(1.0 + delta1 * delta1 / 2.0, 0.5 * 0.04 + 2.0 * 0.2);
    CHECK(threshold == doctest::Approx(1.1328546882018367).epsilon(1e-12));
    CHECK(threshold < 1.2);
    bool found = false;
    for (const GainCheck& c : rep.checks) {
        if (c.name.rfind("k2 >", 0) == 0) {
            found = true;
            CHECK(c.margin == doctest::Approx(1.2 - threshold).epsilon(1e-12));
            CHECK(c.passed);
            CHECK_FALSE(c.hard);
        }
    }
    CHECK(found);
}

TEST_CASE("validate_gains: failure modes") {
    SUBCASE("k3 = 0 is a hard failure") {
        const EstimatorParams est{2.0, 1.2, 0.0, ResetRadius::AimRadius, {}, {}};
        const ValidationReport rep = validate_gains(10.0, 0.2, 1.0, est);
        CHECK_FALSE(rep.all_passed());
        CHECK(rep.hard_failure());
    }
    SUBCASE("k2 below the threshold fails softly") {
        const EstimatorParams est{2.0, 1.0, 0.1, ResetRadius::AimRadius, {}, {}};
        const ValidationReport rep = validate_gains(10.0, 0.2, 1.0, est);
        CHECK_FALSE(rep.all_passed());
        CHECK_FALSE(rep.hard_failure());
    }
    SUBCASE("k below 1/r_a fails softly when k > 1/r_d") {
        // k*r_d in (1, sqrt(2)) puts k between 1/r_d and 1/r_a.
        const EstimatorParams est{2.0, 50.0, 0.1, ResetRadius::AimRadius, {}, {}};
        const ValidationReport rep = validate_gains(10.0, 0.12, 1.0, est);
        CHECK_FALSE(rep.all_passed());
        CHECK_FALSE(rep.hard_failure());
    }
    SUBCASE("summary lists one line per check") {
        const ValidationReport rep = validate_gains(10.0, 0.2, 1.0);
        const std::string text = rep.summary();
        CHECK(std::count(text.begin(), text.end(), '\n') ==
              static_cast<long>(rep.checks.size()));
    }
}

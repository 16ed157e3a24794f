#include <circumnav/dynamics.hpp>

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using namespace circumnav;

namespace {

const TargetPosition kTarget{0.0, -10.0};
const CartesianState kStart{13.0, -2.0, 5.0 * kPi / 4.0};

SimConfig sec5_full_info(double duration = 60.0) {
    SimConfig cfg;
    cfg.target = kTarget;
    cfg.initial_state = kStart;
    cfg.guidance = make_guidance_params(10.0, 0.2, 1.0);
    cfg.duration = duration;
    return cfg;
}

SimConfig sec5_output_feedback(double duration = 60.0) {
    SimConfig cfg = sec5_full_info(duration);
    cfg.controller_mode = ControllerMode::OutputFeedback;
    cfg.estimator = EstimatorParams{2.0, 1.2, 0.1, ResetRadius::AimRadius, 10.0, 0.0};
    return cfg;
}

}  // namespace

TEST_CASE("cartesian_rhs: unicycle kinematics") {
    const CartesianDerivative a = cartesian_rhs({0.0, 0.0, 0.0}, 0.0, 1.0);
    CHECK(a.dx == 1.0);
    CHECK(a.dy == 0.0);
    CHECK(a.dpsi == 0.0);
    const CartesianDerivative b = cartesian_rhs({2.0, 3.0, kPi / 2.0}, 0.3, 1.0);
    CHECK(b.dx == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.dy == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.dpsi == 0.3);
    const CartesianDerivative c = cartesian_rhs({0.0, 0.0, 5.0 * kPi / 4.0}, 0.0, 1.0);
    CHECK(c.dx == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(c.dy == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("polar_rhs: target-relative kinematics") {
    SUBCASE("orbit equilibrium") {
        const PolarDerivative d = polar_rhs({10.0, kPi / 2.0}, -0.1, 1.0);
        CHECK(d.dr == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(d.dtheta == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("heading at the target closes range") {
        const PolarDerivative d = polar_rhs({5.0, 0.0}, 0.0, 1.0);
        CHECK(d.dr == -1.0);
        CHECK(d.dtheta == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("heading away opens range") {
        const PolarDerivative d = polar_rhs({2.0, kPi}, 0.2, 1.0);
        CHECK(d.dr == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(d.dtheta == doctest::Approx(0.2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(polar_rhs({0.0, 0.0}, 0.0, 1.0), ZeroRange);
}

TEST_CASE("step: zero turn rate gives exact straight-line motion") {
    const CartesianState s0{1.0, 2.0, 0.7};
    const CartesianState s1 = step(s0, 0.0, 1.5, 0.25);
    CHECK(s1.x == doctest::Approx(1.0 + 1.5 * 0.25 * std::cos(0.7)).epsilon(1e-15));
    CHECK(s1.y == doctest::Approx(2.0 + 1.5 * 0.25 * std::sin(0.7)).epsilon(1e-15));
    CHECK(s1.psi == 0.7);
}

TEST_CASE("step: constant turn rate follows the closed-form arc") {
    const CartesianState s0{0.0, 0.0, 0.3};
    const double omega = 0.3;
    const double V = 1.0;
    const double h = 1e-3;
    CartesianState s = s0;
    for (int i = 0; i < 10000; ++i) {
        s = step(s, omega, V, h);
    }
    const CartesianState exact = oracles::unicycle_arc(s0, omega, V, 10.0);
    CHECK(s.x == doctest::Approx(exact.x).epsilon(1e-10));
    CHECK(s.y == doctest::Approx(exact.y).epsilon(1e-10));
    CHECK(s.psi == doctest::Approx(exact.psi).epsilon(1e-12));
    // The end point sits on the circle of radius V/omega around the arc center.
    const double cx = s0.x - (V / omega) * std::sin(s0.psi);
    const double cy = s0.y + (V / omega) * std::cos(s0.psi);
    CHECK(std::hypot(s.x - cx, s.y - cy) == doctest::Approx(V / omega).epsilon(1e-10));
}

TEST_CASE("step: one full step matches two half steps to 4th order") {
    const double omega = full_information_control(range(kStart, kTarget),
                                                  -std::cos(bearing(kStart, kTarget)),
                                                  make_guidance_params(10.0, 0.2, 1.0))
                             .omega;
    const CartesianState full = step(kStart, omega, 1.0, 0.01);
    const CartesianState halves = step(step(kStart, omega, 1.0, 0.005), omega, 1.0, 0.005);
    CHECK(std::fabs(full.x - halves.x) < 1e-12);
    CHECK(std::fabs(full.y - halves.y) < 1e-12);
    CHECK(std::fabs(full.psi - halves.psi) < 1e-12);
}

TEST_CASE("locate_crossing: straight-line crossing matches the analytic intersection") {
    const GuidanceParams g = make_guidance_params(10.0, 0.2, 1.0);
    const TargetPosition target{0.0, 0.0};
    // Straight line aimed near the target, crossing the aim circle.
    const CartesianState s0{g.r_a + 0.5, 1.0, kPi};
    const double t_cross = oracles::line_circle_crossing_time(s0, 1.0, target, g.r_a);
    REQUIRE(t_cross > 0.0);
    // Bracket the crossing with one straight step.
    const double h = 2.0 * t_cross;
    const CartesianState s1 = step(s0, 0.0, 1.0, h);
    REQUIRE(range(s1, target) < g.r_a);
    const CrossingEvent ev = locate_crossing({0.0, s0}, {h, s1}, target, g.r_a, 1e-9);
    CHECK(ev.kind == CrossingKind::Entry);
    CHECK(std::fabs(ev.time - t_cross) < 1e-8);
    CHECK(std::fabs(ev.r - g.r_a) <= 1e-9);
    CHECK(ev.r < g.r_a);  // committed on the new side
}

TEST_CASE("locate_crossing: exit direction and no-crossing rejection") {
    const GuidanceParams g = make_guidance_params(10.0, 0.2, 1.0);
    const TargetPosition target{0.0, 0.0};
    const CartesianState inside{g.r_a - 0.5, 0.0, 0.0};
    const CartesianState outside{g.r_a + 0.5, 0.0, 0.0};
    const CrossingEvent ev = locate_crossing({0.0, inside}, {1.0, outside}, target, g.r_a, 1e-9);
    CHECK(ev.kind == CrossingKind::Exit);
    CHECK(ev.r >= g.r_a);
    CHECK_THROWS_AS(locate_crossing({0.0, outside}, {1.0, outside}, target, g.r_a, 1e-9),
                    NoCrossing);
    const CartesianState outside2{g.r_a + 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(locate_crossing({0.0, outside}, {1.0, outside2}, target, g.r_a, 1e-9),
                    NoCrossing);
}

TEST_CASE("run: starting on the equilibrium stays on it") {
    SimConfig cfg;
    cfg.target = TargetPosition{0.0, 0.0};
    cfg.guidance = make_guidance_params(10.0, 0.2, 1.0);
    cfg.initial_state = CartesianState{10.0, 0.0, 3.0 * kPi / 2.0};  // theta = pi/2
    cfg.duration = 50.0;
    const RunResult res = run(cfg);
    CHECK(res.events.empty());
    for (const TrajectoryRecord& rec : res.trajectory) {
        CHECK(std::fabs(rec.r - 10.0) < 1e-3);
    }
    CHECK(std::fabs(res.trajectory.back().r - 10.0) < 1e-9);
}

TEST_CASE("run: benchmark full-information structure") {
    const RunResult res = run(sec5_full_info(60.0));
    REQUIRE(res.trajectory.size() == 60001);
    CHECK(res.trajectory.front().t == 0.0);
    CHECK(res.trajectory.back().t == doctest::Approx(60.0));

    // One entry/exit pair, in order.
    REQUIRE(res.events.size() == 2);
    CHECK(res.events[0].kind == CrossingKind::Entry);
    CHECK(res.events[1].kind == CrossingKind::Exit);
    CHECK(res.events[0].time < res.events[1].time);
    const GuidanceParams g = make_guidance_params(10.0, 0.2, 1.0);
    for (const CrossingEvent& ev : res.events) {
        CHECK(std::fabs(ev.r - g.r_a) <= 1e-9);
    }

    // Exit bearing in (pi/2, 3pi/2), and equal to pi - entry bearing for this
    // chord (entry bearing below pi/2).
    const double theta_e = res.events[0].theta;
    const double theta_x = res.events[1].theta;
    CHECK(theta_e < kPi / 2.0);
    CHECK(theta_x > kPi / 2.0);
    CHECK(theta_x < 3.0 * kPi / 2.0);
    CHECK(theta_x == doctest::Approx(kPi - theta_e).epsilon(1e-6));

    // Straight-line coast: psi constant, omega zero, estimates absent.
    const double psi_inside = res.trajectory[static_cast<std::size_t>(
                                                 (res.events[0].time + 0.01) * 1000.0) +
                                             1]
                                  .state.psi;
    for (const TrajectoryRecord& rec : res.trajectory) {
        if (rec.t > res.events[0].time && rec.t < res.events[1].time) {
            CHECK(rec.inside_Ca);
            CHECK(rec.omega == 0.0);
            CHECK(rec.state.psi == doctest::Approx(psi_inside).epsilon(1e-12));
            CHECK(std::isnan(rec.xhat1));
        }
    }
    // Converged by the end of the 60 s window.
    CHECK(std::fabs(res.trajectory.back().r - 10.0) < 0.05);

    // Record invariants: positive range, and the inside flag implies r < r_a.
    for (const TrajectoryRecord& rec : res.trajectory) {
        CHECK(rec.r > 0.0);
        if (rec.inside_Ca) {
            CHECK(rec.r < g.r_a);
        }
    }
}

TEST_CASE("run: cartesian and polar formulations agree") {
    SimConfig cart = sec5_full_info(30.0);
    SimConfig polar = cart;
    polar.formulation = Formulation::Polar;
    const RunResult a = run(cart);
    const RunResult b = run(polar);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    double worst_r = 0.0;
    double worst_xy = 0.0;
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        worst_r = std::max(worst_r, std::fabs(a.trajectory[i].r - b.trajectory[i].r));
        worst_xy = std::max(worst_xy, std::hypot(a.trajectory[i].state.x - b.trajectory[i].state.x,
                                                 a.trajectory[i].state.y - b.trajectory[i].state.y));
    }
    CHECK(worst_r < 1e-6);
    CHECK(worst_xy < 1e-6);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(std::fabs(a.events[i].time - b.events[i].time) < 1e-6);
    }
}

TEST_CASE("run: a start bearing outside the tangent cone never enters the aim circle") {
    // Headings already clear of both tangent directions keep r >= r_a forever.
    auto gen = oracles::rng(909);
    const GuidanceParams g = make_guidance_params(10.0, 0.2, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        SimConfig cfg;
        cfg.target = TargetPosition{0.0, 0.0};
        cfg.guidance = g;
        const double r0 = oracles::uniform(gen, 1.2 * g.r_a, 30.0);
        const double az = oracles::uniform(gen, 0.0, kTwoPi);
        const double cone = std::asin(g.r_a / r0);
        const double theta0 = oracles::uniform(gen, cone + 0.05, kTwoPi - cone - 0.05);
        const double ref = std::atan2(-r0 * std::sin(az), -r0 * std::cos(az));
        cfg.initial_state =
            CartesianState{r0 * std::cos(az), r0 * std::sin(az), ref + theta0};
        cfg.duration = 120.0;
        const RunResult res = run(cfg);
        for (const CrossingEvent& ev : res.events) {
            CHECK(ev.kind != CrossingKind::Entry);
        }
        for (const TrajectoryRecord& rec : res.trajectory) {
            CHECK(rec.r >= g.r_a - 1e-9);
        }
    }
}

TEST_CASE("run: at most one aim-circle entry under full information") {
    auto gen = oracles::rng(808);
    const GuidanceParams g = make_guidance_params(10.0, 0.2, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        SimConfig cfg;
        cfg.target = TargetPosition{0.0, 0.0};
        cfg.guidance = g;
        const double r0 = oracles::uniform(gen, 0.8, 28.0);
        const double az = oracles::uniform(gen, 0.0, kTwoPi);
        cfg.initial_state = CartesianState{r0 * std::cos(az), r0 * std::sin(az),
                                           oracles::uniform(gen, 0.0, kTwoPi)};
        cfg.duration = 80.0;
        const RunResult res = run(cfg);
        int entries = 0;
        for (const CrossingEvent& ev : res.events) {
            if (ev.kind == CrossingKind::Entry) {
                ++entries;
            }
        }
        CHECK(entries <= 1);
        // Every exit bearing lies in (pi/2, 3pi/2) up to event tolerance.
        for (const CrossingEvent& ev : res.events) {
            if (ev.kind == CrossingKind::Exit) {
                CHECK(ev.theta > kPi / 2.0 - 1e-6);
                CHECK(ev.theta < 3.0 * kPi / 2.0 + 1e-6);
            }
        }
    }
}

TEST_CASE("run: a start inside the aim circle counts as an entry at t = 0") {
    SimConfig cfg = sec5_output_feedback(40.0);
    cfg.initial_state = CartesianState{0.0, -6.0, kPi / 2.0};  // r0 = 4 < r_a
    cfg.estimator->xhat1_init.reset();                         // default to r(0)
    const RunResult res = run(cfg);
    REQUIRE(!res.events.empty());
    CHECK(res.events[0].kind == CrossingKind::Entry);
    CHECK(res.events[0].time == 0.0);
    CHECK(res.events[0].r == doctest::Approx(4.0));
    // Estimates hold their initial values until the exit.
    REQUIRE(res.events.size() >= 2);
    const double t_exit = res.events[1].time;
    for (const TrajectoryRecord& rec : res.trajectory) {
        if (rec.t < t_exit) {
            CHECK(rec.xhat1 == 4.0);
            CHECK(rec.xhat2 == 0.0);
        }
    }
    REQUIRE(res.resets.size() == 1);
    CHECK(res.resets[0].t_entry == 0.0);
}

TEST_CASE("run: output-feedback estimator freezes and resets across the coast") {
    const RunResult res = run(sec5_output_feedback(40.0));
    REQUIRE(res.resets.size() == 1);
    const ResetRecord& rr = res.resets[0];
    CHECK(rr.t_entry < rr.t_exit);
    // Frozen across the coast.
    for (const TrajectoryRecord& rec : res.trajectory) {
        if (rec.t > rr.t_entry && rec.t < rr.t_exit) {
            CHECK(rec.xhat1 == rr.xhat1_entry);
            CHECK(rec.xhat2 == rr.xhat2_entry);
        }
    }
    // Reflection about the aim radius, rate negated.
    const GuidanceParams g = make_guidance_params(10.0, 0.2, 1.0);
    CHECK(rr.xhat1_after == doctest::Approx(2.0 * g.r_a - rr.xhat1_entry).epsilon(1e-12));
    CHECK(rr.xhat2_after == doctest::Approx(-rr.xhat2_entry).epsilon(1e-12));
    // Straight coast: the exit range rate is the negated entry range rate.
    CHECK(rr.r_dot_exit == doctest::Approx(-rr.r_dot_entry).epsilon(1e-8));
}

TEST_CASE("run: configuration and gain errors") {
    SUBCASE("output feedback without estimator parameters") {
        SimConfig cfg = sec5_full_info();
        cfg.controller_mode = ControllerMode::OutputFeedback;
        CHECK_THROWS_AS(run(cfg), ValidationError);
    }
    SUBCASE("nonpositive step") {
        SimConfig cfg = sec5_full_info();
        cfg.step_size = 0.0;
        CHECK_THROWS_AS(run(cfg), ValidationError);
    }
    SUBCASE("strict mode rejects soft gain failures") {
        SimConfig cfg = sec5_output_feedback();
        cfg.estimator->k2 = 1.0;  // below the threshold, soft failure
        cfg.strict = true;
        CHECK_THROWS_AS(run(cfg), GainConditionViolated);
        cfg.strict = false;
        CHECK_NOTHROW(run(sec5_output_feedback(1.0)));
    }
    SUBCASE("permissive mode still runs soft failures") {
        SimConfig cfg = sec5_output_feedback(5.0);
        cfg.estimator->k2 = 1.0;
        const RunResult res = run(cfg);
        CHECK_FALSE(res.validation.all_passed());
        CHECK(res.trajectory.size() == 5001);
    }
    SUBCASE("starting on the target") {
        SimConfig cfg = sec5_full_info();
        cfg.initial_state = CartesianState{0.0, -10.0, 0.0};
        CHECK_THROWS_AS(run(cfg), ZeroRange);
    }
}

TEST_CASE("run: coasting over the target aborts with ZeroRange") {
    // Start inside the aim circle heading exactly at the target; the coast is
    // a straight line through the singularity.
    for (Formulation form : {Formulation::Cartesian, Formulation::Polar}) {
        SimConfig cfg;
        cfg.target = TargetPosition{0.0, 0.0};
        cfg.guidance = make_guidance_params(10.0, 0.2, 1.0);
        cfg.initial_state = CartesianState{5.0, 0.0, kPi};
        cfg.duration = 20.0;
        cfg.formulation = form;
        CHECK_THROWS_AS(run(cfg), ZeroRange);
    }
}

TEST_CASE("run is deterministic") {
    const RunResult a = run(sec5_output_feedback(10.0));
    const RunResult b = run(sec5_output_feedback(10.0));
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        CHECK(a.trajectory[i].r == b.trajectory[i].r);
        CHECK(a.trajectory[i].state.x == b.trajectory[i].state.x);
        CHECK(a.trajectory[i].xhat2 == b.trajectory[i].xhat2);
    }
}

#include <circumnav/guidance.hpp>

#include <circumnav/estimator.hpp>
#include <circumnav/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace circumnav {

double compute_r_a(double r_d, double k) {
    if (r_d <= 0.0 || k <= 0.0) {
        throw InvalidGain("compute_r_a requires r_d > 0 and k > 0");
    }
    const double radicand = r_d * r_d - 1.0 / (k * k);
    if (k <= 1.0 / r_d || radicand <= 0.0) {
        throw InvalidGain("compute_r_a requires k > 1/r_d (aim radius must be positive)");
    }
    return std::sqrt(radicand);
}

double stable_radius(double r_a, double k) {
    return std::sqrt(r_a * r_a + 1.0 / (k * k));
}

GuidanceParams make_guidance_params(double r_d, double k, double V) {
    if (V <= 0.0) {
        throw InvalidGain("airspeed V must be positive");
    }
    return GuidanceParams{r_d, k, V, compute_r_a(r_d, k)};
}

ControlDecision full_information_control(double r, double r_dot, const GuidanceParams& params) {
    if (r < params.r_a) {
        return ControlDecision{0.0, ControlBranch::Coast};
    }
    // The branch condition guarantees r_a/r <= 1; the clamp only absorbs
    // round-off exactly on the switching surface.
    const double ratio = std::clamp(params.r_a / r, -1.0, 1.0);
    const double reference_rate = params.V * std::cos(kPi - std::asin(ratio));
    return ControlDecision{params.k * (reference_rate - r_dot), ControlBranch::Active};
}

ControlDecision output_feedback_control(double r, double xhat2, const GuidanceParams& params) {
    return full_information_control(r, xhat2, params);
}

// ---------------------------------------------------------------------------
// Gain validation
// ---------------------------------------------------------------------------

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const GainCheck& c) { return c.passed; });
}

bool ValidationReport::hard_failure() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const GainCheck& c) { return c.hard && !c.passed; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& c : checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%-34s margin=%+.6g  %s%s\n", c.name.c_str(), c.margin,
                      c.passed ? "pass" : "FAIL", c.hard && !c.passed ? " (hard)" : "");
        out += line;
    }
    return out;
}

namespace {

void add_check(ValidationReport& report, std::string name, double margin, bool hard) {
    report.checks.push_back(GainCheck{std::move(name), margin, margin > 0.0, hard});
}

}  // namespace

ValidationReport validate_gains(double r_d, double k, double V) {
    ValidationReport report;
    add_check(report, "r_d > 0", r_d, true);
    add_check(report, "k > 0", k, true);
    add_check(report, "V > 0", V, true);
    if (r_d > 0.0 && k > 0.0) {
        add_check(report, "k > 1/r_d", k - 1.0 / r_d, true);
    } else {
        add_check(report, "k > 1/r_d", -1.0, true);
    }
    return report;
}

ValidationReport validate_gains(double r_d, double k, double V, const EstimatorParams& est) {
    ValidationReport report = validate_gains(r_d, k, V);
    if (report.hard_failure()) {
        return report;
    }
    // k > 1/r_a is strictly stronger than k > 1/r_d; without it the
    // disturbance bound behind the estimator analysis does not hold, but the
    // loop can still be simulated, so the margin check is soft while the gain
    // positivity checks stay hard.
    const double radicand = r_d * r_d - 1.0 / (k * k);
    const double r_a = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    if (r_a > 0.0) {
        add_check(report, "k > 1/r_a", k - 1.0 / r_a, false);
    } else {
        add_check(report, "k > 1/r_a", -1.0, false);
    }
    add_check(report, "k1 > 0", est.k1, true);
    add_check(report, "k3 > 0", est.k3, true);
    if (r_a > 0.0 && est.k1 > 0.0) {
        const double delta1 = V * V * (2.0 * k + 1.0 / r_a);
        const double bound1 = 1.0 + delta1 * delta1 / est.k1;
        const double bound2 = 0.5 * k * k * V * V + 2.0 * k * V;
        add_check(report, "k2 > max{1+d1^2/k1, d2^2/2+2*d2}", est.k2 - std::max(bound1, bound2),
                  false);
    } else {
        add_check(report, "k2 > max{1+d1^2/k1, d2^2/2+2*d2}", -1.0, false);
    }
    return report;
}

}  // namespace circumnav

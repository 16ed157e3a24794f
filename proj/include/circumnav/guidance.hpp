#pragma once

#include <circumnav/errors.hpp>

#include <string>
#include <vector>

namespace circumnav {

struct EstimatorParams;  // estimator.hpp

/// Which measurement feeds the turn-rate law.
enum class ControllerMode {
    FullInformation,  // range and measured range rate
    OutputFeedback,   // range and estimated range rate
};

/// Parameters of the switching circumnavigation controller.
///
/// The UAV aims at the circle of radius r_a around the target; the resulting
/// stable orbit has radius sqrt(r_a^2 + 1/k^2) = r_d. Only k > 0 (clockwise
/// orbit) is supported.
struct GuidanceParams {
    double r_d = 0.0;  // desired standoff radius [m]
    double k = 0.0;    // controller gain [1/m]
    double V = 0.0;    // airspeed [m/s]
    double r_a = 0.0;  // aim-circle radius [m], derived
};

enum class ControlBranch {
    Active,  // r >= r_a: feedback law engaged
    Coast,   // r <  r_a: zero turn rate, straight-line flight
};

struct ControlDecision {
    double omega = 0.0;  // commanded turn rate [rad/s]
    ControlBranch branch = ControlBranch::Active;
};

/// Aim-circle radius sqrt(r_d^2 - 1/k^2). Throws InvalidGain unless k > 1/r_d.
double compute_r_a(double r_d, double k);

/// Radius of the stable orbit produced by aiming at a circle of radius r_a:
/// sqrt(r_a^2 + 1/k^2). Inverse of compute_r_a.
double stable_radius(double r_a, double k);

/// Build a parameter set with the derived aim radius. Throws InvalidGain when
/// r_d, k or V is nonpositive or k <= 1/r_d.
GuidanceParams make_guidance_params(double r_d, double k, double V);

/// Switching turn-rate law from range and range rate:
///   omega = k * (V*cos(pi - asin(r_a/r)) - r_dot)  when r >= r_a,
///   omega = 0                                      otherwise.
/// For |r_dot| <= V the command is bounded by 2*k*V.
ControlDecision full_information_control(double r, double r_dot, const GuidanceParams& params);

/// Same law with the measured range rate replaced by its estimate; identical
/// to full_information_control evaluated at (r, xhat2).
ControlDecision output_feedback_control(double r, double xhat2, const GuidanceParams& params);

// ---------------------------------------------------------------------------
// Gain validation
// ---------------------------------------------------------------------------

/// One inequality of the validity conditions, with its evaluated margin
/// (positive = satisfied). Hard checks make the parameter set unusable for
/// simulation; the others only void the convergence guarantees.
struct GainCheck {
    std::string name;
    double margin = 0.0;
    bool passed = false;
    bool hard = false;
};

struct ValidationReport {
    std::vector<GainCheck> checks;

    bool all_passed() const;
    bool hard_failure() const;
    std::string summary() const;  // one line per check
};

/// Validity conditions for the full-information controller:
/// r_d, k, V > 0 and k > 1/r_d.
ValidationReport validate_gains(double r_d, double k, double V);

/// Validity conditions for the output-feedback loop: k > 1/r_a plus the
/// estimator gain inequalities
///   k1 > 0,  k3 > 0,
///   k2 > max{1 + V^4*(2k + 1/r_a)^2 / k1,  k^2*V^2/2 + 2*k*V}.
ValidationReport validate_gains(double r_d, double k, double V, const EstimatorParams& est);

}  // namespace circumnav

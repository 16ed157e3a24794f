#pragma once

#include <circumnav/errors.hpp>
#include <circumnav/estimator.hpp>
#include <circumnav/geometry.hpp>
#include <circumnav/guidance.hpp>

#include <optional>
#include <vector>

namespace circumnav {

/// Which form of the vehicle dynamics the run integrates. Both describe the
/// same motion; the polar twin exists so the two can be cross-checked.
enum class Formulation {
    Cartesian,  // (x, y, psi)
    Polar,      // (r, theta) plus the position azimuth for record reconstruction
};

struct SimConfig {
    TargetPosition target;
    CartesianState initial_state;
    GuidanceParams guidance;
    std::optional<EstimatorParams> estimator;  // required in OutputFeedback mode
    ControllerMode controller_mode = ControllerMode::FullInformation;
    double step_size = 1e-3;        // [s]
    double duration = 300.0;        // [s]
    double event_tolerance = 1e-9;  // |r - r_a| at a localized crossing [m]
    Formulation formulation = Formulation::Cartesian;
    bool strict = false;                    // abort when any gain check fails
    double settling_band_fraction = 0.005;  // metrics band as a fraction of r_d
};

/// One integration-grid sample of every signal of interest.
struct TrajectoryRecord {
    double t = 0.0;  // [s]
    CartesianState state;
    double r = 0.0;      // range [m]
    double theta = 0.0;  // bearing [rad], wrapped to [0, 2*pi)
    double r_dot = 0.0;  // -V*cos(theta) [m/s]
    double omega = 0.0;  // turn rate held on the segment ending here [rad/s]
    double xhat1 = 0.0;  // range estimate [m]; NaN when no estimator runs
    double xhat2 = 0.0;  // range-rate estimate [m/s]; NaN when no estimator runs
    bool inside_Ca = false;
};

enum class CrossingKind {
    Entry,  // range decreasing through r_a
    Exit,   // range increasing through r_a
};

/// A localized crossing of the aim circle. The stored state sits on the new
/// side of the boundary with |r - r_a| within the event tolerance.
struct CrossingEvent {
    CrossingKind kind = CrossingKind::Entry;
    double time = 0.0;  // [s]
    CartesianState state_at_event;
    double r = 0.0;      // range at the event [m]
    double theta = 0.0;  // bearing at the event [rad]
};

/// Bookkeeping for one freeze/reset cycle of the estimator, emitted at the
/// exit event that closes it. Lets callers audit the estimation-error jump
/// across the coast.
struct ResetRecord {
    double t_entry = 0.0;
    double t_exit = 0.0;
    double r_entry = 0.0;       // localized range at entry (~ r_a)
    double r_exit = 0.0;        // localized range at exit  (~ r_a)
    double r_dot_entry = 0.0;   // range rate at entry
    double r_dot_exit = 0.0;    // range rate at exit (~ -r_dot_entry)
    double xhat1_entry = 0.0;   // frozen values
    double xhat2_entry = 0.0;
    double xhat1_after = 0.0;   // values immediately after the reset
    double xhat2_after = 0.0;
};

struct CartesianDerivative {
    double dx = 0.0;
    double dy = 0.0;
    double dpsi = 0.0;
};

struct PolarDerivative {
    double dr = 0.0;
    double dtheta = 0.0;
};

/// Unicycle kinematics: (V*cos(psi), V*sin(psi), omega).
CartesianDerivative cartesian_rhs(const CartesianState& state, double omega, double V);

/// Target-relative kinematics: (-V*cos(theta), omega + V*sin(theta)/r).
/// Throws ZeroRange when r is below the coincidence threshold.
PolarDerivative polar_rhs(const PolarState& state, double omega, double V);

/// One classical 4th-order step of the vehicle with the turn rate held
/// constant over the step.
CartesianState step(const CartesianState& state, double omega, double V, double h);

struct TimedState {
    double t = 0.0;
    CartesianState state;
};

/// Localize a crossing of the circle of radius r_a between two consecutive
/// samples by bisecting the linear interpolant of the step. The returned
/// event lies strictly on the new side of the boundary with |r - r_a| <= tol.
/// Throws NoCrossing when both endpoints are on the same side (r >= r_a
/// counts as outside).
CrossingEvent locate_crossing(const TimedState& prev, const TimedState& next,
                              const TargetPosition& target, double r_a, double tol);

struct RunResult {
    std::vector<TrajectoryRecord> trajectory;  // one record per grid step
    std::vector<CrossingEvent> events;         // entries and exits, in time order
    std::vector<ResetRecord> resets;           // one per completed freeze/reset cycle
    ValidationReport validation;               // gain report evaluated before the run
};

/// Hybrid executive: fixed-step integration of the selected formulation with
/// zero-order-hold control, aim-circle crossings localized by bisection, and
/// the estimator frozen across each coast and reset at the exit.
///
/// A start inside the aim circle counts as an entry at t = 0. Throws
/// GainConditionViolated in strict mode when validation fails, InvalidGain on
/// hard gain failures, and ZeroRange if the UAV reaches the target.
RunResult run(const SimConfig& config);

}  // namespace circumnav

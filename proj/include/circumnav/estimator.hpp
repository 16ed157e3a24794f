#pragma once

#include <circumnav/errors.hpp>
#include <circumnav/guidance.hpp>

#include <optional>

namespace circumnav {

/// Anchor radius for the range-estimate reflection applied when the UAV
/// leaves the aim circle.
enum class ResetRadius {
    DesiredRadius,  // xhat1 <- 2*r_d - xhat1 ("paper" mode)
    AimRadius,      // xhat1 <- 2*r_a - xhat1 ("theory" mode, default)
};

/// Gains of the sliding-mode range-rate estimator
///   xhat1' = xhat2 + k1*|e|^(1/2)*sgn(e)
///   xhat2' = k2*sgn(e) + k3*e,        e = r - xhat1.
struct EstimatorParams {
    double k1 = 0.0;  // square-root injection gain
    double k2 = 0.0;  // discontinuous injection gain
    double k3 = 0.0;  // linear injection gain
    ResetRadius reset_radius = ResetRadius::AimRadius;
    std::optional<double> xhat1_init;  // default: range measured at start
    std::optional<double> xhat2_init;  // default: 0
};

struct EstimatorState {
    double xhat1 = 0.0;   // range estimate [m]
    double xhat2 = 0.0;   // range-rate estimate [m/s]
    bool frozen = false;  // true while the UAV is inside the aim circle
};

struct EstimatorDerivative {
    double dxhat1 = 0.0;
    double dxhat2 = 0.0;
};

/// sgn with sgn(0) = 0, so the sliding manifold is an equilibrium of the
/// discretized estimator.
inline double sgn(double v) {
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

/// Estimator right-hand side for the unfrozen regime (UAV outside the aim
/// circle). While frozen both derivatives are zero; the run loop handles that.
EstimatorDerivative estimator_rhs(const EstimatorState& est, double r,
                                  const EstimatorParams& params);

/// Hold the estimate across the coast through the aim circle. Throws
/// AlreadyFrozen on a second freeze without an intervening reset.
EstimatorState freeze(EstimatorState est);

/// Exit-time reset: reflect the range estimate about twice the anchor radius
/// and negate the rate estimate, then resume integration. Throws NotFrozen
/// when no matching freeze happened.
EstimatorState reset_at_exit(EstimatorState est, const EstimatorParams& params,
                             const GuidanceParams& guidance);

}  // namespace circumnav

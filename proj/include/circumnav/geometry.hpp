#pragma once

#include <circumnav/errors.hpp>

namespace circumnav {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Ranges below this are treated as the UAV sitting on the target.
inline constexpr double kZeroRangeThreshold = 1e-9;  // [m]

struct TargetPosition {
    double x = 0.0;  // [m]
    double y = 0.0;  // [m]
};

/// World-frame UAV pose. The heading accumulates without wrapping so the
/// integrator never sees a jump; wrap on read where needed.
struct CartesianState {
    double x = 0.0;    // [m]
    double y = 0.0;    // [m]
    double psi = 0.0;  // heading [rad], unbounded
};

/// Target-relative state: range and bearing.
struct PolarState {
    double r = 0.0;      // range [m], > 0
    double theta = 0.0;  // bearing [rad], in [0, 2*pi)
};

/// Reduce an angle to [0, 2*pi).
double wrap_angle(double a);

/// Euclidean distance from the UAV to the target.
double range(const CartesianState& state, const TargetPosition& target);

/// Bearing: angle from the UAV->target vector to the heading, counterclockwise,
/// in [0, 2*pi). Satisfies dr/dt = -V*cos(theta). Throws ZeroRange when the
/// UAV coincides with the target.
double bearing(const CartesianState& state, const TargetPosition& target);

/// Range and bearing in one call. Throws ZeroRange.
PolarState to_polar(const CartesianState& state, const TargetPosition& target);

}  // namespace circumnav

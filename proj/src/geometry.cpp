#include <circumnav/geometry.hpp>

#include <cmath>

namespace circumnav {

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    if (w >= kTwoPi) {  // fmod round-off can land exactly on 2*pi
        w = 0.0;
    }
    return w;
}

double range(const CartesianState& state, const TargetPosition& target) {
    return std::hypot(state.x - target.x, state.y - target.y);
}

double bearing(const CartesianState& state, const TargetPosition& target) {
    if (range(state, target) < kZeroRangeThreshold) {
        throw ZeroRange("bearing undefined: UAV coincides with the target");
    }
    const double to_target = std::atan2(target.y - state.y, target.x - state.x);
    return wrap_angle(state.psi - to_target);
}

PolarState to_polar(const CartesianState& state, const TargetPosition& target) {
    const double r = range(state, target);
    if (r < kZeroRangeThreshold) {
        throw ZeroRange("to_polar undefined: UAV coincides with the target");
    }
    const double to_target = std::atan2(target.y - state.y, target.x - state.x);
    return PolarState{r, wrap_angle(state.psi - to_target)};
}

}  // namespace circumnav

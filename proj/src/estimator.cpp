#include <circumnav/estimator.hpp>

#include <cmath>

namespace circumnav {

EstimatorDerivative estimator_rhs(const EstimatorState& est, double r,
                                  const EstimatorParams& params) {
    const double e = r - est.xhat1;
    return EstimatorDerivative{
        est.xhat2 + params.k1 * std::sqrt(std::fabs(e)) * sgn(e),
        params.k2 * sgn(e) + params.k3 * e,
    };
}

EstimatorState freeze(EstimatorState est) {
    if (est.frozen) {
        throw AlreadyFrozen("estimator already frozen");
    }
    est.frozen = true;
    return est;
}

EstimatorState reset_at_exit(EstimatorState est, const EstimatorParams& params,
                             const GuidanceParams& guidance) {
    if (!est.frozen) {
        throw NotFrozen("estimator reset without a matching freeze");
    }
    const double anchor =
        params.reset_radius == ResetRadius::DesiredRadius ? guidance.r_d : guidance.r_a;
    est.xhat1 = 2.0 * anchor - est.xhat1;
    est.xhat2 = -est.xhat2;
    est.frozen = false;
    return est;
}

}  // namespace circumnav

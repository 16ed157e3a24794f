#pragma once

#include <circumnav/dynamics.hpp>
#include <circumnav/estimator.hpp>
#include <circumnav/guidance.hpp>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace circumnav {

// ---------------------------------------------------------------------------
// Closed-loop linearization
// ---------------------------------------------------------------------------

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct LinearizationResult {
    Mat2 A{};  // Jacobian of the (r, theta) closed loop at (r_d, pi/2)
    std::array<std::complex<double>, 2> eigenvalues{};
    bool hurwitz = false;  // both eigenvalue real parts < 0
};

/// Analytic linearization of the full-information closed loop around the
/// (r_d, pi/2) equilibrium:
///   A = [[0, V], [-k*V*r_a^2/(r_d^3*s) - V/r_d^2, -k*V]],  s = sqrt(1 - r_a^2/r_d^2).
/// With the derived aim radius the discriminant vanishes and both eigenvalues
/// equal -k*V/2. Throws InvalidGain for an unusable parameter set.
LinearizationResult linearize_closed_loop(const GuidanceParams& params);

/// Right-hand side of the (r, theta) closed loop on the active branch; the
/// function linearize_closed_loop differentiates. Exposed so finite-difference
/// checks can probe the same map.
std::array<double, 2> closed_loop_rhs(double r, double theta, const GuidanceParams& params);

// ---------------------------------------------------------------------------
// Orbit Lyapunov function
// ---------------------------------------------------------------------------

/// V(r, theta) = 1 - sin(theta) + integral_{r_d}^{r} (k*sqrt(1 - r_a^2/z^2) - 1/z) dz,
/// evaluated by adaptive quadrature to 1e-10 absolute tolerance. Nonnegative
/// for r >= r_a, zero only at (r_d, pi/2). Throws DomainError when r < r_a.
double guidance_lyapunov(double r, double theta, const GuidanceParams& params);

/// One trajectory sample of the orbit Lyapunov function.
struct LyapunovSample {
    double t = 0.0;
    double value = 0.0;                // V at the sample, >= 0
    double derivative_estimate = 0.0;  // forward difference to the next
                                       // eligible sample; NaN at gaps/end
};

/// Evaluate the orbit Lyapunov function along a trajectory at every eligible
/// sample (r >= r_a and bearing in [0, pi]). Increments between neighbouring
/// samples are integrated directly so the cost stays linear in the trajectory
/// length.
std::vector<LyapunovSample> lyapunov_trace(const std::vector<TrajectoryRecord>& trajectory,
                                           const GuidanceParams& params);

struct DescentReport {
    int samples_checked = 0;
    int violations = 0;
    double worst_slope = 0.0;  // largest finite-difference dV/dt seen
    double threshold = 0.0;    // slope bound used: 1e-6 + step_size
};

/// Check that the finite-difference slope of the orbit Lyapunov function is
/// nonpositive (up to the threshold) at every eligible sample pair.
DescentReport check_lyapunov_descent(const std::vector<TrajectoryRecord>& trajectory,
                                     const GuidanceParams& params, double step_size);

// ---------------------------------------------------------------------------
// Estimator Lyapunov certificate
// ---------------------------------------------------------------------------

/// Matrices of the estimator finite-time stability argument, assembled from
/// the gains and the disturbance bounds delta1 = V^2*(2k + 1/r_a), delta2 = k*V.
/// The certificate is valid when P, Q1 - Q3 and Q2 - Q4 are all positive
/// definite; the margins carry the relevant smallest eigenvalues either way.
///
/// The middle entry of Q2 is stated with an undefined symbol in the source
/// analysis; k3 is substituted (the only remaining gain, matching the 2*k3
/// slot of Q1) and the certificate flags that assumption.
struct EstimatorLyapunovCertificate {
    Mat3 P{}, Q1{}, Q2{}, Q3{}, Q4{};
    double delta1 = 0.0;
    double delta2 = 0.0;
    double min_eig_P = 0.0;
    double max_eig_P = 0.0;
    double min_eig_Q1_minus_Q3 = 0.0;  // margin of the decay estimate
    double min_eig_Q2_minus_Q4 = 0.0;
    double eta = 0.0;  // min_eig(Q1-Q3)/sqrt(max_eig(P)), decay coefficient
    bool valid = false;
    bool q2_middle_entry_assumed_k3 = true;
};

EstimatorLyapunovCertificate estimator_certificate(const GuidanceParams& guidance,
                                                   const EstimatorParams& est);

/// Estimator error Lyapunov function V = xi' P xi with
/// xi = [|p|^(1/2)*sgn(p), p, q]; equals
/// 2*k2*|p| + k3*p^2 + q^2/2 + (k1*|p|^(1/2)*sgn(p) - q)^2 / 2.
/// Invariant under (p, q) -> (-p, -q).
double estimator_error_lyapunov(double p, double q, const EstimatorParams& est);

/// Time for the decay estimate 2*sqrt(V) <= 2*sqrt(V0) - eta*t to reach zero:
/// 2*sqrt(V0)*sqrt(max_eig(P))/min_eig(Q1-Q3). Meaningless (nonpositive
/// denominator) when the certificate is invalid; returned as computed.
double convergence_time_bound(double V0, const EstimatorLyapunovCertificate& cert);

/// Eigenvalues of a symmetric 3x3 matrix, ascending.
std::array<double, 3> sym3_eigenvalues(const Mat3& m);

// ---------------------------------------------------------------------------
// Run metrics
// ---------------------------------------------------------------------------

/// Estimation errors below this count as converged (both |xhat1 - r| and
/// |xhat2 - r_dot|, outside frozen intervals).
inline constexpr double kEstimatorConvergenceTol = 1e-3;  // [m], [m/s]

struct RunMetrics {
    std::optional<double> settling_time_to_band;  // first time |r - r_d| enters
                                                  // and stays inside the band
    double final_radius_error = 0.0;              // |r(end) - r_d| [m]
    double max_abs_omega = 0.0;                   // [rad/s]
    int num_Ca_entries = 0;
    std::optional<double> estimator_convergence_time;  // absent without estimator
                                                       // or when never converged
};

RunMetrics compute_metrics(const std::vector<TrajectoryRecord>& trajectory,
                           const std::vector<CrossingEvent>& events, const SimConfig& config);

}  // namespace circumnav

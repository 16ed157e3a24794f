#include <circumnav/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace circumnav {

namespace {

constexpr double kQuadTol = 1e-10;     // absolute tolerance of full integrals
constexpr double kQuadIncTol = 1e-12;  // tolerance of per-step increments
constexpr int kResyncInterval = 4096;  // full re-integration cadence in lyapunov_trace

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -adaptive_simpson(f, b, a, tol);
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48);
}

// Integrand of the radial part of the orbit Lyapunov function,
// k*sqrt(1 - (r_a/z)^2) - 1/z, defined for z >= r_a.
struct PhiIntegrand {
    double r_a;
    double k;
    double operator()(double z) const {
        const double ratio = r_a / z;
        const double arg = std::max(0.0, 1.0 - ratio * ratio);
        return k * std::sqrt(arg) - 1.0 / z;
    }
};

double integrate_phi(double from, double to, const GuidanceParams& params, double tol) {
    return adaptive_simpson(PhiIntegrand{params.r_a, params.k}, from, to, tol);
}

}  // namespace

// ---------------------------------------------------------------------------
// Closed-loop linearization
// ---------------------------------------------------------------------------

std::array<double, 2> closed_loop_rhs(double r, double theta, const GuidanceParams& params) {
    const double ratio = std::clamp(params.r_a / r, -1.0, 1.0);
    const double f1 = -params.V * std::cos(theta);
    const double f2 = params.k * (params.V * std::cos(kPi - std::asin(ratio)) +
                                  params.V * std::cos(theta)) +
                      params.V * std::sin(theta) / r;
    return {f1, f2};
}

LinearizationResult linearize_closed_loop(const GuidanceParams& params) {
    if (validate_gains(params.r_d, params.k, params.V).hard_failure()) {
        throw InvalidGain("linearization requires r_d, k, V > 0 and k > 1/r_d");
    }
    const double rd = params.r_d;
    const double ra = params.r_a;
    const double s = std::sqrt(1.0 - (ra / rd) * (ra / rd));

    LinearizationResult out;
    out.A[0][0] = 0.0;
    out.A[0][1] = params.V;
    out.A[1][0] = -params.k * params.V * ra * ra / (rd * rd * rd * s) - params.V / (rd * rd);
    out.A[1][1] = -params.k * params.V;

    const double tr = out.A[0][0] + out.A[1][1];
    const double det = out.A[0][0] * out.A[1][1] - out.A[0][1] * out.A[1][0];
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        out.eigenvalues[0] = {(tr - root) / 2.0, 0.0};
        out.eigenvalues[1] = {(tr + root) / 2.0, 0.0};
    } else {
        const double imag = std::sqrt(-disc) / 2.0;
        out.eigenvalues[0] = {tr / 2.0, -imag};
        out.eigenvalues[1] = {tr / 2.0, imag};
    }
    out.hurwitz = out.eigenvalues[0].real() < 0.0 && out.eigenvalues[1].real() < 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Orbit Lyapunov function
// ---------------------------------------------------------------------------

double guidance_lyapunov(double r, double theta, const GuidanceParams& params) {
    if (r < params.r_a) {
        throw DomainError("orbit Lyapunov function undefined inside the aim circle");
    }
    return 1.0 - std::sin(theta) + integrate_phi(params.r_d, r, params, kQuadTol);
}

namespace {

bool lyapunov_eligible(const TrajectoryRecord& rec, const GuidanceParams& params) {
    return rec.r >= params.r_a && rec.theta <= kPi;
}

}  // namespace

std::vector<LyapunovSample> lyapunov_trace(const std::vector<TrajectoryRecord>& trajectory,
                                           const GuidanceParams& params) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<LyapunovSample> samples;
    std::vector<std::size_t> indices;  // trajectory index per sample

    double phi = 0.0;
    bool chained = false;  // previous record was eligible, increment is valid
    double prev_r = 0.0;
    int since_resync = 0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const TrajectoryRecord& rec = trajectory[i];
        if (!lyapunov_eligible(rec, params)) {
            chained = false;
            continue;
        }
        if (!chained || ++since_resync >= kResyncInterval) {
            phi = integrate_phi(params.r_d, rec.r, params, kQuadTol);
            since_resync = 0;
        } else {
            phi += integrate_phi(prev_r, rec.r, params, kQuadIncTol);
        }
        chained = true;
        prev_r = rec.r;
        samples.push_back(LyapunovSample{rec.t, 1.0 - std::sin(rec.theta) + phi, nan});
        indices.push_back(i);
    }
    for (std::size_t s = 0; s + 1 < samples.size(); ++s) {
        if (indices[s + 1] == indices[s] + 1) {
            samples[s].derivative_estimate =
                (samples[s + 1].value - samples[s].value) / (samples[s + 1].t - samples[s].t);
        }
    }
    return samples;
}

DescentReport check_lyapunov_descent(const std::vector<TrajectoryRecord>& trajectory,
                                     const GuidanceParams& params, double step_size) {
    DescentReport report;
    report.threshold = 1e-6 + step_size;
    report.worst_slope = -std::numeric_limits<double>::infinity();
    for (const LyapunovSample& s : lyapunov_trace(trajectory, params)) {
        if (std::isnan(s.derivative_estimate)) {
            continue;
        }
        ++report.samples_checked;
        report.worst_slope = std::max(report.worst_slope, s.derivative_estimate);
        if (s.derivative_estimate > report.threshold) {
            ++report.violations;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Estimator Lyapunov certificate
// ---------------------------------------------------------------------------

std::array<double, 3> sym3_eigenvalues(const Mat3& m) {
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    std::array<double, 3> eig{};
    if (p1 == 0.0) {
        eig = {m[0][0], m[1][1], m[2][2]};
        std::sort(eig.begin(), eig.end());
        return eig;
    }
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
        }
    }
    const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
    eig = {e3, 3.0 * q - e1 - e3, e1};
    std::sort(eig.begin(), eig.end());
    return eig;
}

namespace {

Mat3 mat3_sub(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out[i][j] = a[i][j] - b[i][j];
        }
    }
    return out;
}

}  // namespace

EstimatorLyapunovCertificate estimator_certificate(const GuidanceParams& guidance,
                                                   const EstimatorParams& est) {
    const double k1 = est.k1;
    const double k2 = est.k2;
    const double k3 = est.k3;
    const double V = guidance.V;

    EstimatorLyapunovCertificate cert;
    cert.delta1 = V * V * (2.0 * guidance.k + 1.0 / guidance.r_a);
    cert.delta2 = guidance.k * V;

    cert.P = Mat3{{{0.5 * (4.0 * k2 + k1 * k1), 0.0, -0.5 * k1},
                   {0.0, k3, 0.0},
                   {-0.5 * k1, 0.0, 1.0}}};
    cert.Q1 = Mat3{{{0.5 * k1 * (2.0 * k2 + k1 * k1), 0.0, -0.5 * k1 * k1},
                    {0.0, k1 * k3, 0.0},
                    {-0.5 * k1 * k1, 0.0, 0.5 * k1}}};
    cert.Q2 = Mat3{{{k2 * (k2 + 2.0 * k1 * k1), 0.0, 0.0},
                    {0.0, k2 * k3, 0.0},  // middle entry assumed k3
                    {0.0, 0.0, k2}}};
    cert.Q3 = Mat3{{{cert.delta1 * (1.0 + k1), 0.0, 0.0},
                    {0.0, 0.0, 0.0},
                    {0.0, 0.0, cert.delta1}}};
    cert.Q4 = Mat3{{{0.5 * k1 * k1, 0.0, 0.0},
                    {0.0, 0.0, 0.0},
                    {0.0, 0.0, 0.5 * cert.delta2 * cert.delta2 + 2.0 * cert.delta2}}};

    const auto eig_p = sym3_eigenvalues(cert.P);
    cert.min_eig_P = eig_p.front();
    cert.max_eig_P = eig_p.back();
    cert.min_eig_Q1_minus_Q3 = sym3_eigenvalues(mat3_sub(cert.Q1, cert.Q3)).front();
    cert.min_eig_Q2_minus_Q4 = sym3_eigenvalues(mat3_sub(cert.Q2, cert.Q4)).front();
    cert.eta = cert.min_eig_Q1_minus_Q3 / std::sqrt(cert.max_eig_P);
    cert.valid = cert.min_eig_P > 0.0 && cert.min_eig_Q1_minus_Q3 > 0.0 &&
                 cert.min_eig_Q2_minus_Q4 > 0.0;
    return cert;
}

double estimator_error_lyapunov(double p, double q, const EstimatorParams& est) {
    const double xi1 = std::sqrt(std::fabs(p)) * sgn(p);
    const double bracket = est.k1 * xi1 - q;
    return 2.0 * est.k2 * std::fabs(p) + est.k3 * p * p + 0.5 * q * q + 0.5 * bracket * bracket;
}

double convergence_time_bound(double V0, const EstimatorLyapunovCertificate& cert) {
    return 2.0 * std::sqrt(V0) * std::sqrt(cert.max_eig_P) / cert.min_eig_Q1_minus_Q3;
}

// ---------------------------------------------------------------------------
// Run metrics
// ---------------------------------------------------------------------------

RunMetrics compute_metrics(const std::vector<TrajectoryRecord>& trajectory,
                           const std::vector<CrossingEvent>& events, const SimConfig& config) {
    RunMetrics metrics;
    if (trajectory.empty()) {
        return metrics;
    }
    const double r_d = config.guidance.r_d;
    const double band = config.settling_band_fraction * r_d;

    metrics.final_radius_error = std::fabs(trajectory.back().r - r_d);
    for (const TrajectoryRecord& rec : trajectory) {
        metrics.max_abs_omega = std::max(metrics.max_abs_omega, std::fabs(rec.omega));
    }
    for (const CrossingEvent& ev : events) {
        if (ev.kind == CrossingKind::Entry) {
            ++metrics.num_Ca_entries;
        }
    }

    // Settling: time of the first sample after the last one outside the band.
    std::size_t last_outside = trajectory.size();
    for (std::size_t i = trajectory.size(); i-- > 0;) {
        if (std::fabs(trajectory[i].r - r_d) >= band) {
            last_outside = i;
            break;
        }
    }
    if (last_outside == trajectory.size()) {
        metrics.settling_time_to_band = trajectory.front().t;
    } else if (last_outside + 1 < trajectory.size()) {
        metrics.settling_time_to_band = trajectory[last_outside + 1].t;
    }

    if (config.controller_mode == ControllerMode::OutputFeedback) {
        std::vector<std::size_t> unfrozen;
        unfrozen.reserve(trajectory.size());
        for (std::size_t i = 0; i < trajectory.size(); ++i) {
            if (!trajectory[i].inside_Ca) {
                unfrozen.push_back(i);
            }
        }
        if (!unfrozen.empty()) {
            auto violates = [&](std::size_t i) {
                const TrajectoryRecord& rec = trajectory[i];
                return std::fabs(rec.xhat1 - rec.r) > kEstimatorConvergenceTol ||
                       std::fabs(rec.xhat2 - rec.r_dot) > kEstimatorConvergenceTol;
            };
            std::size_t last_violation = unfrozen.size();
            for (std::size_t j = unfrozen.size(); j-- > 0;) {
                if (violates(unfrozen[j])) {
                    last_violation = j;
                    break;
                }
            }
            if (last_violation == unfrozen.size()) {
                metrics.estimator_convergence_time = trajectory[unfrozen.front()].t;
            } else if (last_violation + 1 < unfrozen.size()) {
                metrics.estimator_convergence_time = trajectory[unfrozen[last_violation + 1]].t;
            }
        }
    }
    return metrics;
}

}  // namespace circumnav

#include <circumnav/dynamics.hpp>

#include <array>
#include <cmath>
#include <limits>

namespace circumnav {

CartesianDerivative cartesian_rhs(const CartesianState& state, double omega, double V) {
    return CartesianDerivative{V * std::cos(state.psi), V * std::sin(state.psi), omega};
}

PolarDerivative polar_rhs(const PolarState& state, double omega, double V) {
    if (state.r < kZeroRangeThreshold) {
        throw ZeroRange("polar dynamics singular: range reached zero");
    }
    return PolarDerivative{-V * std::cos(state.theta),
                           omega + V * std::sin(state.theta) / state.r};
}

namespace {

// Integrator state shared by both formulations:
//   Cartesian: [x, y, psi, xhat1, xhat2]
//   Polar:     [r, theta, phi, xhat1, xhat2]   (phi = azimuth of the UAV
//              around the target, carried so full records can be rebuilt)
// theta, phi and psi accumulate without wrapping.
using Y = std::array<double, 5>;

struct RhsContext {
    Formulation form = Formulation::Cartesian;
    TargetPosition target;
    double V = 0.0;
    double omega = 0.0;        // held constant over each (sub)step
    bool estimator = false;    // integrate the estimator states?
    bool frozen = false;       // estimator derivatives forced to zero
    const EstimatorParams* est_params = nullptr;
};

Y eval_rhs(const Y& y, const RhsContext& c) {
    Y d{};
    double r_stage = 0.0;
    if (c.form == Formulation::Cartesian) {
        const CartesianDerivative cd = cartesian_rhs(CartesianState{y[0], y[1], y[2]}, c.omega, c.V);
        d[0] = cd.dx;
        d[1] = cd.dy;
        d[2] = cd.dpsi;
        r_stage = std::hypot(y[0] - c.target.x, y[1] - c.target.y);
    } else {
        const PolarDerivative pd = polar_rhs(PolarState{y[0], y[1]}, c.omega, c.V);
        d[0] = pd.dr;
        d[1] = pd.dtheta;
        d[2] = -c.V * std::sin(y[1]) / y[0];
        r_stage = y[0];
    }
    if (c.estimator && !c.frozen) {
        const EstimatorDerivative ed =
            estimator_rhs(EstimatorState{y[3], y[4], false}, r_stage, *c.est_params);
        d[3] = ed.dxhat1;
        d[4] = ed.dxhat2;
    }
    return d;
}

Y axpy(const Y& y, double a, const Y& d) {
    Y out;
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] + a * d[i];
    }
    return out;
}

Y rk4_step(const Y& y, double h, const RhsContext& c) {
    const Y k1 = eval_rhs(y, c);
    const Y k2 = eval_rhs(axpy(y, 0.5 * h, k1), c);
    const Y k3 = eval_rhs(axpy(y, 0.5 * h, k2), c);
    const Y k4 = eval_rhs(axpy(y, h, k3), c);
    Y out;
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

double range_of(const Y& y, const RhsContext& c) {
    if (c.form == Formulation::Cartesian) {
        return std::hypot(y[0] - c.target.x, y[1] - c.target.y);
    }
    return y[0];
}

CartesianState vehicle_of(const Y& y, const RhsContext& c) {
    if (c.form == Formulation::Cartesian) {
        return CartesianState{y[0], y[1], y[2]};
    }
    return CartesianState{c.target.x + y[0] * std::cos(y[2]),
                          c.target.y + y[0] * std::sin(y[2]), y[1] + y[2] + kPi};
}

double theta_of(const Y& y, const RhsContext& c) {
    if (c.form == Formulation::Cartesian) {
        return bearing(CartesianState{y[0], y[1], y[2]}, c.target);
    }
    return wrap_angle(y[1]);
}

struct EventHit {
    double t = 0.0;
    Y y{};
    double r = 0.0;
};

/// Bisect the linear interpolant of one step until the new-side endpoint has
/// |r - r_a| <= tol. The returned point sits strictly on the new side, so the
/// committed post-event state agrees with the event kind.
EventHit bisect_event(double t0, const Y& y0, double t1, const Y& y1, bool entering, double r_a,
                      double tol, const RhsContext& c) {
    auto at = [&](double s) {
        Y y;
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = y0[i] + s * (y1[i] - y0[i]);
        }
        return y;
    };
    auto on_new_side = [&](double r) { return entering ? r < r_a : r >= r_a; };

    double s_lo = 0.0;
    double s_hi = 1.0;
    Y y_hi = y1;
    double r_hi = range_of(y1, c);
    for (int i = 0; i < 200 && std::fabs(r_hi - r_a) > tol; ++i) {
        const double s_mid = 0.5 * (s_lo + s_hi);
        const Y y_mid = at(s_mid);
        const double r_mid = range_of(y_mid, c);
        if (on_new_side(r_mid)) {
            s_hi = s_mid;
            y_hi = y_mid;
            r_hi = r_mid;
        } else {
            s_lo = s_mid;
        }
    }
    return EventHit{t0 + s_hi * (t1 - t0), y_hi, r_hi};
}

struct PendingEntry {
    double t = 0.0;
    double r = 0.0;
    double r_dot = 0.0;
    double xhat1 = 0.0;
    double xhat2 = 0.0;
};

}  // namespace

CartesianState step(const CartesianState& state, double omega, double V, double h) {
    RhsContext c;
    c.form = Formulation::Cartesian;
    c.V = V;
    c.omega = omega;
    const Y y = rk4_step(Y{state.x, state.y, state.psi, 0.0, 0.0}, h, c);
    return CartesianState{y[0], y[1], y[2]};
}

CrossingEvent locate_crossing(const TimedState& prev, const TimedState& next,
                              const TargetPosition& target, double r_a, double tol) {
    const double r_prev = range(prev.state, target);
    const double r_next = range(next.state, target);
    const bool prev_outside = r_prev >= r_a;
    const bool next_outside = r_next >= r_a;
    if (prev_outside == next_outside) {
        throw NoCrossing("no aim-circle crossing between the given samples");
    }
    RhsContext c;
    c.form = Formulation::Cartesian;
    c.target = target;
    const EventHit hit =
        bisect_event(prev.t, Y{prev.state.x, prev.state.y, prev.state.psi, 0.0, 0.0}, next.t,
                     Y{next.state.x, next.state.y, next.state.psi, 0.0, 0.0},
                     /*entering=*/prev_outside, r_a, tol, c);
    const CartesianState at_event{hit.y[0], hit.y[1], hit.y[2]};
    return CrossingEvent{prev_outside ? CrossingKind::Entry : CrossingKind::Exit, hit.t, at_event,
                         hit.r, bearing(at_event, target)};
}

RunResult run(const SimConfig& config) {
    {
        std::vector<std::string> problems;
        if (!(config.step_size > 0.0)) {
            problems.push_back("step_size must be positive");
        }
        if (!(config.duration > 0.0)) {
            problems.push_back("duration must be positive");
        }
        if (!(config.event_tolerance > 0.0)) {
            problems.push_back("event_tolerance must be positive");
        }
        if (config.controller_mode == ControllerMode::OutputFeedback && !config.estimator) {
            problems.push_back("output_feedback controller requires estimator parameters");
        }
        if (!problems.empty()) {
            throw ValidationError(std::move(problems));
        }
    }

    const GuidanceParams& g = config.guidance;
    const bool est_on = config.controller_mode == ControllerMode::OutputFeedback;

    RunResult result;
    result.validation = est_on ? validate_gains(g.r_d, g.k, g.V, *config.estimator)
                               : validate_gains(g.r_d, g.k, g.V);
    if (config.strict && !result.validation.all_passed()) {
        throw GainConditionViolated("gain conditions not satisfied:\n" +
                                    result.validation.summary());
    }
    if (result.validation.hard_failure()) {
        throw InvalidGain("unusable gain set:\n" + result.validation.summary());
    }

    RhsContext c;
    c.form = config.formulation;
    c.target = config.target;
    c.V = g.V;
    c.estimator = est_on;
    c.est_params = est_on ? &*config.estimator : nullptr;

    const double r0 = range(config.initial_state, config.target);
    if (r0 < kZeroRangeThreshold) {
        throw ZeroRange("initial state coincides with the target");
    }

    Y y{};
    if (config.formulation == Formulation::Cartesian) {
        y[0] = config.initial_state.x;
        y[1] = config.initial_state.y;
        y[2] = config.initial_state.psi;
    } else {
        const double phi0 = std::atan2(config.initial_state.y - config.target.y,
                                       config.initial_state.x - config.target.x);
        y[0] = r0;
        y[1] = config.initial_state.psi - (phi0 + kPi);  // theta, unwrapped
        y[2] = phi0;
    }
    if (est_on) {
        y[3] = config.estimator->xhat1_init.value_or(r0);
        y[4] = config.estimator->xhat2_init.value_or(0.0);
    }

    auto r_dot_of = [&](const Y& s) { return -g.V * std::cos(theta_of(s, c)); };

    auto decide = [&](const Y& s) {
        const double r = range_of(s, c);
        return est_on ? output_feedback_control(r, s[4], g)
                      : full_information_control(r, r_dot_of(s), g);
    };

    bool inside = r0 < g.r_a;
    bool frozen = false;
    PendingEntry pending{};  // valid while the estimator is frozen

    // A start inside the aim circle counts as an entry at t = 0.
    if (inside) {
        result.events.push_back(CrossingEvent{CrossingKind::Entry, 0.0, config.initial_state, r0,
                                              theta_of(y, c)});
        if (est_on) {
            pending = PendingEntry{0.0, r0, r_dot_of(y), y[3], y[4]};
            frozen = freeze(EstimatorState{y[3], y[4], false}).frozen;
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto make_record = [&](double t, const Y& s, double omega_used) {
        const double r = range_of(s, c);
        if (r < kZeroRangeThreshold) {
            throw ZeroRange("range reached zero during the run");
        }
        const double theta = theta_of(s, c);
        TrajectoryRecord rec;
        rec.t = t;
        rec.state = vehicle_of(s, c);
        rec.r = r;
        rec.theta = theta;
        rec.r_dot = -g.V * std::cos(theta);
        rec.omega = omega_used;
        rec.xhat1 = est_on ? s[3] : nan;
        rec.xhat2 = est_on ? s[4] : nan;
        rec.inside_Ca = inside;
        return rec;
    };

    const auto n_steps =
        static_cast<std::size_t>(std::ceil(config.duration / config.step_size - 1e-9));
    result.trajectory.reserve(n_steps + 1);
    result.trajectory.push_back(make_record(0.0, y, decide(y).omega));

    double t = 0.0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double t_target = std::min(static_cast<double>(i) * config.step_size,
                                         config.duration);
        double omega_used = 0.0;
        int splits = 0;
        while (t < t_target) {
            if (++splits > 64) {
                throw std::runtime_error("event cascade: more than 64 aim-circle crossings "
                                         "within one integration step");
            }
            const ControlDecision dec = decide(y);
            omega_used = dec.omega;
            c.omega = dec.omega;
            c.frozen = frozen;
            const Y trial = rk4_step(y, t_target - t, c);
            const bool trial_inside = range_of(trial, c) < g.r_a;
            if (trial_inside == inside) {
                y = trial;
                t = t_target;
                continue;
            }
            const EventHit hit =
                bisect_event(t, y, t_target, trial, !inside, g.r_a, config.event_tolerance, c);
            y = hit.y;
            t = hit.t;
            result.events.push_back(CrossingEvent{inside ? CrossingKind::Exit : CrossingKind::Entry,
                                                  t, vehicle_of(y, c), hit.r, theta_of(y, c)});
            if (!inside) {
                inside = true;
                if (est_on) {
                    pending = PendingEntry{t, hit.r, r_dot_of(y), y[3], y[4]};
                    frozen = freeze(EstimatorState{y[3], y[4], frozen}).frozen;
                }
            } else {
                inside = false;
                if (est_on) {
                    const EstimatorState after =
                        reset_at_exit(EstimatorState{y[3], y[4], frozen}, *config.estimator, g);
                    result.resets.push_back(ResetRecord{pending.t, t, pending.r, hit.r,
                                                        pending.r_dot, r_dot_of(y), pending.xhat1,
                                                        pending.xhat2, after.xhat1, after.xhat2});
                    y[3] = after.xhat1;
                    y[4] = after.xhat2;
                    frozen = after.frozen;
                }
            }
        }
        result.trajectory.push_back(make_record(t_target, y, omega_used));
    }
    return result;
}

}  // namespace circumnav

#include <circumnav/emit.hpp>

#include <cmath>
#include <cstdio>

namespace circumnav {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& trajectory) {
    out << "t,x,y,psi,r,theta,r_dot,omega,xhat1,xhat2,inside_Ca\n";
    for (const TrajectoryRecord& rec : trajectory) {
        out << format_double(rec.t) << ',' << format_double(rec.state.x) << ','
            << format_double(rec.state.y) << ',' << format_double(rec.state.psi) << ','
            << format_double(rec.r) << ',' << format_double(rec.theta) << ','
            << format_double(rec.r_dot) << ',' << format_double(rec.omega) << ','
            << format_double(rec.xhat1) << ',' << format_double(rec.xhat2) << ','
            << (rec.inside_Ca ? '1' : '0') << '\n';
    }
}

void write_events_csv(std::ostream& out, const std::vector<CrossingEvent>& events) {
    out << "kind,t,x,y,r\n";
    for (const CrossingEvent& ev : events) {
        out << (ev.kind == CrossingKind::Entry ? "entry" : "exit") << ','
            << format_double(ev.time) << ',' << format_double(ev.state_at_event.x) << ','
            << format_double(ev.state_at_event.y) << ',' << format_double(ev.r) << '\n';
    }
}

void write_lyapunov_csv(std::ostream& out, const std::vector<LyapunovSample>& samples) {
    out << "t,V,dVdt\n";
    for (const LyapunovSample& s : samples) {
        out << format_double(s.t) << ',' << format_double(s.value) << ','
            << format_double(s.derivative_estimate) << '\n';
    }
}

nlohmann::json metrics_json(const RunMetrics& metrics) {
    nlohmann::json j;
    if (metrics.settling_time_to_band) {
        j["settling_time_to_band"] = *metrics.settling_time_to_band;
    } else {
        j["settling_time_to_band"] = nullptr;
    }
    j["final_radius_error"] = metrics.final_radius_error;
    j["max_abs_omega"] = metrics.max_abs_omega;
    j["num_Ca_entries"] = metrics.num_Ca_entries;
    if (metrics.estimator_convergence_time) {
        j["estimator_convergence_time"] = *metrics.estimator_convergence_time;
    } else {
        j["estimator_convergence_time"] = nullptr;
    }
    return j;
}

namespace {

nlohmann::json mat3_json(const Mat3& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m) {
        rows.push_back(nlohmann::json{row[0], row[1], row[2]});
    }
    return rows;
}

}  // namespace

nlohmann::json certificate_json(const EstimatorLyapunovCertificate& cert) {
    nlohmann::json j;
    j["P"] = mat3_json(cert.P);
    j["Q1"] = mat3_json(cert.Q1);
    j["Q2"] = mat3_json(cert.Q2);
    j["Q3"] = mat3_json(cert.Q3);
    j["Q4"] = mat3_json(cert.Q4);
    j["delta1"] = cert.delta1;
    j["delta2"] = cert.delta2;
    j["min_eig_P"] = cert.min_eig_P;
    j["max_eig_P"] = cert.max_eig_P;
    j["min_eig_Q1_minus_Q3"] = cert.min_eig_Q1_minus_Q3;
    j["min_eig_Q2_minus_Q4"] = cert.min_eig_Q2_minus_Q4;
    j["eta"] = cert.eta;
    j["valid"] = cert.valid;
    j["q2_middle_entry"] = "assumed k3";
    return j;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepAxis>& axes,
                     const std::vector<PointResult<RunMetrics>>& results) {
    out << "index";
    for (const SweepAxis& axis : axes) {
        out << ',' << axis.field;
    }
    out << ",status,error,settling_time_to_band,final_radius_error,max_abs_omega,"
           "num_Ca_entries,estimator_convergence_time\n";
    for (std::size_t index = 0; index < results.size(); ++index) {
        out << index;
        std::size_t rest = index;
        std::vector<double> coords(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            coords[a] = axes[a].values[rest % axes[a].values.size()];
            rest /= axes[a].values.size();
        }
        for (double c : coords) {
            out << ',' << format_double(c);
        }
        const PointResult<RunMetrics>& res = results[index];
        if (!res.ok()) {
            std::string msg = res.error;
            for (char& ch : msg) {  // keep the CSV single-line per row
                if (ch == ',' || ch == '\n') {
                    ch = ';';
                }
            }
            out << ",error," << msg << ",,,,,\n";
            continue;
        }
        const RunMetrics& m = *res.value;
        out << ",ok,,"
            << (m.settling_time_to_band ? format_double(*m.settling_time_to_band) : "") << ','
            << format_double(m.final_radius_error) << ',' << format_double(m.max_abs_omega) << ','
            << m.num_Ca_entries << ','
            << (m.estimator_convergence_time ? format_double(*m.estimator_convergence_time) : "")
            << '\n';
    }
}

}  // namespace circumnav

#pragma once

#include <circumnav/analysis.hpp>
#include <circumnav/batch.hpp>
#include <circumnav/dynamics.hpp>
#include <circumnav/scenario.hpp>

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace circumnav {

/// Shortest exact decimal form of a double (17 significant digits), so CSV
/// output round-trips bit for bit.
std::string format_double(double v);

/// Columns: t,x,y,psi,r,theta,r_dot,omega,xhat1,xhat2,inside_Ca.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& trajectory);

/// Columns: kind,t,x,y,r.
void write_events_csv(std::ostream& out, const std::vector<CrossingEvent>& events);

/// Columns: t,V,dVdt.
void write_lyapunov_csv(std::ostream& out, const std::vector<LyapunovSample>& samples);

nlohmann::json metrics_json(const RunMetrics& metrics);

nlohmann::json certificate_json(const EstimatorLyapunovCertificate& cert);

/// One row per grid point, ordered by grid index: the swept field values,
/// a status column, and the run metrics (empty cells on failure).
void write_sweep_csv(std::ostream& out, const std::vector<SweepAxis>& axes,
                     const std::vector<PointResult<RunMetrics>>& results);

}  // namespace circumnav

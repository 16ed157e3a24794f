#include <circumnav/batch.hpp>

namespace circumnav {

namespace {

RunMetrics metrics_reducer(const SimConfig& config, const RunResult& result) {
    return compute_metrics(result.trajectory, result.events, config);
}

}  // namespace

std::vector<PointResult<RunMetrics>> run_batch(std::span<const SimConfig> configs, int threads) {
    return run_batch_map(configs, threads, metrics_reducer);
}

std::vector<PointResult<RunMetrics>> run_batch_serial(std::span<const SimConfig> configs) {
    return run_batch_map_serial(configs, metrics_reducer);
}

}  // namespace circumnav

#pragma once

#include <circumnav/analysis.hpp>
#include <circumnav/dynamics.hpp>

#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace circumnav {

/// Outcome of one batch point: a reduced value on success, the error text on
/// failure. Failures never abort the batch.
template <typename R>
struct PointResult {
    std::optional<R> value;
    std::string error;

    bool ok() const { return value.has_value(); }
};

namespace detail {

template <typename Reducer>
using reduced_t = std::decay_t<std::invoke_result_t<Reducer, const SimConfig&, const RunResult&>>;

template <typename Reducer>
PointResult<reduced_t<Reducer>> run_one(const SimConfig& config, Reducer& reduce) {
    PointResult<reduced_t<Reducer>> out;
    try {
        const RunResult run_result = run(config);
        out.value = reduce(config, run_result);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace detail

/// Serial reference executor: runs every configuration in index order.
/// Kept alongside the parallel executor so the two can be compared in tests
/// and benchmarks.
template <typename Reducer>
std::vector<PointResult<detail::reduced_t<Reducer>>> run_batch_map_serial(
    std::span<const SimConfig> configs, Reducer reduce) {
    std::vector<PointResult<detail::reduced_t<Reducer>>> results(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        results[i] = detail::run_one(configs[i], reduce);
    }
    return results;
}

/// Parallel executor: independent runs distributed across OpenMP worker
/// threads, results stored by grid index so the output is identical to the
/// serial executor regardless of scheduling. threads <= 0 uses the OpenMP
/// default. Falls back to the serial loop when built without OpenMP.
template <typename Reducer>
std::vector<PointResult<detail::reduced_t<Reducer>>> run_batch_map(
    std::span<const SimConfig> configs, int threads, Reducer reduce) {
#ifdef _OPENMP
    std::vector<PointResult<detail::reduced_t<Reducer>>> results(configs.size());
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        results[static_cast<std::size_t>(i)] =
            detail::run_one(configs[static_cast<std::size_t>(i)], reduce);
    }
    return results;
#else
    (void)threads;
    return run_batch_map_serial(configs, std::move(reduce));
#endif
}

/// Metrics for every configuration, computed in parallel.
std::vector<PointResult<RunMetrics>> run_batch(std::span<const SimConfig> configs, int threads);

/// Serial twin of run_batch.
std::vector<PointResult<RunMetrics>> run_batch_serial(std::span<const SimConfig> configs);

}  // namespace circumnav

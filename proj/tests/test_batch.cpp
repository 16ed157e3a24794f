#include <circumnav/batch.hpp>

#include <circumnav/scenario.hpp>

#include <doctest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"

using namespace circumnav;

namespace {

std::vector<SimConfig> heading_fan(int n, double duration) {
    std::vector<SimConfig> configs;
    for (int i = 0; i < n; ++i) {
        SimConfig cfg;
        cfg.target = TargetPosition{0.0, -10.0};
        cfg.initial_state =
            CartesianState{13.0, -2.0, kTwoPi * static_cast<double>(i) / static_cast<double>(n)};
        cfg.guidance = make_guidance_params(10.0, 0.2, 1.0);
        cfg.duration = duration;
        configs.push_back(cfg);
    }
    return configs;
}

bool same_metrics(const RunMetrics& a, const RunMetrics& b) {
    return a.settling_time_to_band == b.settling_time_to_band &&
           a.final_radius_error == b.final_radius_error && a.max_abs_omega == b.max_abs_omega &&
           a.num_Ca_entries == b.num_Ca_entries &&
           a.estimator_convergence_time == b.estimator_convergence_time;
}

}  // namespace

TEST_CASE("parallel batch reproduces the serial reference exactly") {
    const auto configs = heading_fan(6, 20.0);
    const auto serial = run_batch_serial(configs);
    const auto parallel = run_batch(configs, 4);
    const auto one_thread = run_batch(configs, 1);
    REQUIRE(serial.size() == configs.size());
    REQUIRE(parallel.size() == configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        REQUIRE(serial[i].ok());
        REQUIRE(parallel[i].ok());
        REQUIRE(one_thread[i].ok());
        CHECK(same_metrics(*serial[i].value, *parallel[i].value));
        CHECK(same_metrics(*serial[i].value, *one_thread[i].value));
    }
}

TEST_CASE("batch outcomes stay in grid order") {
    // Distinct durations make the points distinguishable via the final time.
    std::vector<SimConfig> configs = heading_fan(4, 5.0);
    for (std::size_t i = 0; i < configs.size(); ++i) {
        configs[i].duration = 5.0 + static_cast<double>(i);
    }
    const auto results = run_batch_map(configs, 3, [](const SimConfig& cfg, const RunResult& res) {
        return std::pair<double, double>{cfg.duration, res.trajectory.back().t};
    });
    for (std::size_t i = 0; i < configs.size(); ++i) {
        REQUIRE(results[i].ok());
        CHECK(results[i].value->first == 5.0 + static_cast<double>(i));
        CHECK(results[i].value->second == doctest::Approx(5.0 + static_cast<double>(i)));
    }
}

TEST_CASE("bundled heading sweep converges from every start") {
#ifndef CIRCUMNAV_SCENARIO_DIR
#define CIRCUMNAV_SCENARIO_DIR "scenarios"
#endif
    const ScenarioFile sc =
        load_scenario(std::string(CIRCUMNAV_SCENARIO_DIR) + "/sweep_headings.scn");
    const auto points = expand_sweep(sc);
    REQUIRE(points.size() == 8);
    std::vector<SimConfig> configs;
    for (const ScenarioFile& p : points) {
        configs.push_back(p.make_config());
    }
    const auto results = run_batch(configs, 0);
    for (const auto& res : results) {
        REQUIRE(res.ok());
        CHECK(res.value->final_radius_error < 0.05);
        CHECK(res.value->num_Ca_entries <= 1);
    }
}

TEST_CASE("per-point failures are recorded without aborting the batch") {
    auto configs = heading_fan(3, 5.0);
    configs[1].strict = true;
    configs[1].controller_mode = ControllerMode::OutputFeedback;
    configs[1].estimator = EstimatorParams{2.0, 1.0, 0.1, ResetRadius::AimRadius, {}, {}};
    // k2 = 1.0 sits below the validity threshold, so the strict point refuses.
    const auto results = run_batch(configs, 2);
    CHECK(results[0].ok());
    CHECK_FALSE(results[1].ok());
    CHECK(!results[1].error.empty());
    CHECK(results[2].ok());
}

// Compares the serial batch executor against the OpenMP one on an
// initial-heading fan and verifies that both produce identical metrics.

#include <circumnav/batch.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace circumnav;

namespace {

std::vector<SimConfig> make_fan(int n, double duration) {
    std::vector<SimConfig> configs;
    configs.reserve(static_cast<std::size_t>(n));
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

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int runs = 32;
    double duration = 60.0;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--runs") {
            runs = std::atoi(argv[i + 1]);
        } else if (key == "--duration") {
            duration = std::atof(argv[i + 1]);
        } else {
            std::fprintf(stderr, "usage: %s [--runs N] [--duration S]\n", argv[0]);
            return 1;
        }
    }

    const auto configs = make_fan(runs, duration);
    std::printf("batch: %d runs x %.0f s at h = 1e-3\n", runs, duration);

    const auto t_serial = std::chrono::steady_clock::now();
    const auto serial = run_batch_serial(configs);
    const double serial_s = seconds_since(t_serial);
    std::printf("serial reference : %8.3f s\n", serial_s);

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    const auto t_par = std::chrono::steady_clock::now();
    const auto parallel = run_batch(configs, 0);
    const double parallel_s = seconds_since(t_par);
    std::printf("parallel (%2d thr): %8.3f s   speedup %.2fx\n", threads, parallel_s,
                serial_s / parallel_s);

    for (std::size_t i = 0; i < serial.size(); ++i) {
        const bool same = serial[i].ok() == parallel[i].ok() &&
                          (!serial[i].ok() ||
                           (serial[i].value->final_radius_error ==
                                parallel[i].value->final_radius_error &&
                            serial[i].value->max_abs_omega == parallel[i].value->max_abs_omega &&
                            serial[i].value->num_Ca_entries == parallel[i].value->num_Ca_entries));
        if (!same) {
            std::printf("MISMATCH at grid index %zu\n", i);
            return 1;
        }
    }
    std::printf("parallel output identical to the serial reference\n");
    return 0;
}

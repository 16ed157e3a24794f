// Command-line front end: scenario execution, parameter sweeps, gain
// validation and stability-certificate emission.

#include <circumnav/batch.hpp>
#include <circumnav/emit.hpp>
#include <circumnav/scenario.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace circumnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitGains = 2;

struct Overrides {
    bool strict = false;
    std::optional<double> step;
    std::optional<double> duration;
    std::optional<std::string> out;
    std::optional<std::string> reset_mode;
    int parallel = 0;
};

void apply_overrides(ScenarioFile& sc, const Overrides& ov) {
    if (ov.step) {
        sc.step = *ov.step;
    }
    if (ov.duration) {
        sc.duration = *ov.duration;
    }
    if (ov.out) {
        sc.output_prefix = *ov.out;
    }
    if (ov.reset_mode) {
        if (!sc.estimator) {
            throw ValidationError({"--reset-mode requires an [estimator] section"});
        }
        sc.estimator->reset_radius = *ov.reset_mode == "paper" ? ResetRadius::DesiredRadius
                                                               : ResetRadius::AimRadius;
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << content;
}

void emit_artifacts(const ScenarioFile& sc, const SimConfig& cfg, const RunResult& res) {
    const std::string prefix = sc.output_prefix;
    if (sc.emit.count(Artifact::TrajectoryCsv)) {
        std::ostringstream buf;
        write_trajectory_csv(buf, res.trajectory);
        write_file(prefix + "_trajectory.csv", buf.str());
    }
    if (sc.emit.count(Artifact::EventsCsv)) {
        std::ostringstream buf;
        write_events_csv(buf, res.events);
        write_file(prefix + "_events.csv", buf.str());
    }
    if (sc.emit.count(Artifact::MetricsJson)) {
        const RunMetrics metrics = compute_metrics(res.trajectory, res.events, cfg);
        write_file(prefix + "_metrics.json", metrics_json(metrics).dump(2) + "\n");
    }
    if (sc.emit.count(Artifact::LyapunovCsv)) {
        std::ostringstream buf;
        write_lyapunov_csv(buf, lyapunov_trace(res.trajectory, cfg.guidance));
        write_file(prefix + "_lyapunov.csv", buf.str());
    }
    if (sc.emit.count(Artifact::CertificateJson)) {
        if (!cfg.estimator) {
            throw ValidationError({"certificate_json requires an [estimator] section"});
        }
        const auto cert = estimator_certificate(cfg.guidance, *cfg.estimator);
        write_file(prefix + "_certificate.json", certificate_json(cert).dump(2) + "\n");
    }
}

int cmd_run(const std::string& path, const Overrides& ov) {
    ScenarioFile sc = load_scenario(path);
    apply_overrides(sc, ov);
    SimConfig cfg = sc.make_config();
    cfg.strict = ov.strict;
    if (!cfg.strict) {
        const ValidationReport report =
            cfg.controller_mode == ControllerMode::OutputFeedback
                ? validate_gains(sc.r_d, sc.k, sc.V, *cfg.estimator)
                : validate_gains(sc.r_d, sc.k, sc.V);
        if (!report.all_passed()) {
            std::cerr << "warning: gain conditions not satisfied, running anyway:\n"
                      << report.summary();
        }
    }
    const RunResult res = run(cfg);
    emit_artifacts(sc, cfg, res);
    const RunMetrics metrics = compute_metrics(res.trajectory, res.events, cfg);
    std::cout << sc.name << ": " << res.trajectory.size() << " samples, "
              << res.events.size() << " crossings, final |r - r_d| = "
              << format_double(metrics.final_radius_error) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& path, const Overrides& ov) {
    ScenarioFile sc = load_scenario(path);
    apply_overrides(sc, ov);
    const std::vector<ScenarioFile> points = expand_sweep(sc);

    std::vector<SimConfig> configs;
    std::vector<PointResult<RunMetrics>> results(points.size());
    std::vector<std::size_t> runnable;  // grid indices whose config built
    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            SimConfig cfg = points[i].make_config();
            cfg.strict = ov.strict;
            configs.push_back(cfg);
            runnable.push_back(i);
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    }
    const auto batch = run_batch(configs, ov.parallel);
    for (std::size_t j = 0; j < runnable.size(); ++j) {
        results[runnable[j]] = batch[j];
    }

    std::ostringstream buf;
    write_sweep_csv(buf, sc.sweep, results);
    const std::string out_path = sc.output_prefix + "_sweep.csv";
    write_file(out_path, buf.str());
    std::size_t failed = 0;
    for (const auto& r : results) {
        if (!r.ok()) {
            ++failed;
        }
    }
    std::cout << sc.name << ": " << results.size() << " grid points (" << failed
              << " failed) -> " << out_path << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& path) {
    const ScenarioFile sc = load_scenario(path);
    ValidationReport report;
    if (sc.estimator) {
        const EstimatorParams est{sc.estimator->k1, sc.estimator->k2, sc.estimator->k3,
                                  sc.estimator->reset_radius, {}, {}};
        report = validate_gains(sc.r_d, sc.k, sc.V, est);
    } else {
        report = validate_gains(sc.r_d, sc.k, sc.V);
    }
    std::cout << report.summary();
    std::cout << (report.all_passed() ? "all conditions satisfied\n"
                                      : "conditions not satisfied\n");
    return report.all_passed() ? kExitOk : kExitGains;
}

int cmd_certificate(const std::string& path, const std::optional<std::string>& out) {
    const ScenarioFile sc = load_scenario(path);
    if (!sc.estimator) {
        throw ValidationError({"certificate requires an [estimator] section"});
    }
    const GuidanceParams g = make_guidance_params(sc.r_d, sc.k, sc.V);
    const EstimatorParams est{sc.estimator->k1, sc.estimator->k2, sc.estimator->k3,
                              sc.estimator->reset_radius, {}, {}};
    const auto cert = estimator_certificate(g, est);
    const std::string text = certificate_json(cert).dump(2) + "\n";
    if (out) {
        write_file(*out, text);
    } else {
        std::cout << text;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Range-only UAV circumnavigation simulator"};
    app.require_subcommand(1);

    Overrides ov;
    std::string scenario;
    std::optional<std::string> cert_out;

    auto add_common = [&](CLI::App* cmd, bool with_parallel) {
        cmd->add_option("scenario", scenario, "scenario file")->required();
        cmd->add_flag("--strict", ov.strict, "refuse to run when any gain condition fails");
        cmd->add_option("--step", ov.step, "integration step override [s]");
        cmd->add_option("--duration", ov.duration, "run length override [s]");
        cmd->add_option("--out", ov.out, "output path prefix override");
        cmd->add_option("--reset-mode", ov.reset_mode,
                        "estimator reset anchor: 'theory' reflects the range estimate about "
                        "the aim radius, 'paper' about the desired radius")
            ->check(CLI::IsMember({"theory", "paper"}));
        if (with_parallel) {
            cmd->add_option("--parallel", ov.parallel, "worker threads (0 = default)");
        }
    };

    CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario and emit its artifacts");
    add_common(run_cmd, false);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run the scenario's grid and aggregate metrics");
    add_common(sweep_cmd, true);
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "evaluate the gain conditions and print the report");
    validate_cmd->add_option("scenario", scenario, "scenario file")->required();
    CLI::App* cert_cmd =
        app.add_subcommand("certificate", "emit the estimator stability certificate");
    cert_cmd->add_option("scenario", scenario, "scenario file")->required();
    cert_cmd->add_option("--out", cert_out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(scenario, ov);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(scenario, ov);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(scenario);
        }
        return cmd_certificate(scenario, cert_out);
    } catch (const GainConditionViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGains;
    } catch (const InvalidGain& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGains;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

#pragma once

#include <circumnav/dynamics.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace circumnav {

enum class Artifact {
    TrajectoryCsv,
    EventsCsv,
    MetricsJson,
    LyapunovCsv,
    CertificateJson,
};

/// One sweep dimension: a numeric scenario field and the values it takes.
struct SweepAxis {
    std::string field;  // dotted name, e.g. "guidance.V"
    std::vector<double> values;
};

/// A parsed scenario: raw numbers as written in the file, before any derived
/// quantity is computed. make_config() derives the aim radius and assembles
/// the SimConfig, so sweeps can rewrite raw fields first.
struct ScenarioFile {
    std::string name;  // file stem

    TargetPosition target;
    CartesianState initial;
    double r_d = 0.0;
    double k = 0.0;
    double V = 0.0;

    struct EstimatorSection {
        double k1 = 0.0;
        double k2 = 0.0;
        double k3 = 0.0;
        ResetRadius reset_radius = ResetRadius::AimRadius;
        std::optional<double> xhat1_init;
        std::optional<double> xhat2_init;
    };
    std::optional<EstimatorSection> estimator;

    ControllerMode controller = ControllerMode::FullInformation;
    Formulation formulation = Formulation::Cartesian;
    double step = 1e-3;
    double duration = 300.0;
    double event_tolerance = 1e-9;
    double settling_band = 0.005;

    std::string output_prefix;
    std::set<Artifact> emit;  // defaults to trajectory, events, metrics
    std::vector<SweepAxis> sweep;

    /// Assemble the run configuration. Throws InvalidGain for unusable gains.
    SimConfig make_config() const;
};

/// Parse scenario text. origin names the source in diagnostics. Throws
/// ParseError (with line/field context) on malformed input and
/// ValidationError listing every semantic problem at once.
ScenarioFile parse_scenario(const std::string& text, const std::string& origin);

/// Load and parse a scenario file.
ScenarioFile load_scenario(const std::string& path);

/// Overwrite one numeric field addressed by its dotted name. Throws
/// ValidationError for unknown fields.
void apply_field(ScenarioFile& scenario, const std::string& field, double value);

/// Expand the sweep grid into one scenario per grid point, ordered by grid
/// index (first axis slowest, last axis fastest). Throws ValidationError when
/// no grid is defined.
std::vector<ScenarioFile> expand_sweep(const ScenarioFile& scenario);

}  // namespace circumnav

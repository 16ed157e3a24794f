#include <circumnav/scenario.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace circumnav {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
};

using Section = std::map<std::string, RawValue>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

Document tokenize(const std::string& text, const std::string& origin) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(origin + ":" + std::to_string(line_no) +
                                     ": unterminated section header",
                                 line_no, line);
            }
            section = trim(line.substr(1, line.size() - 2));
            doc[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                                 ": expected 'key = value'",
                             line_no, line);
        }
        if (section.empty()) {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                                 ": key outside of any [section]",
                             line_no, line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key or value",
                             line_no, key);
        }
        if (!doc[section].emplace(key, RawValue{value, line_no}).second) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                                 "'",
                             line_no, key);
        }
    }
    return doc;
}

double parse_number(const RawValue& raw, const std::string& field, const std::string& origin) {
    const char* begin = raw.text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(origin + ":" + std::to_string(raw.line) + ": field '" + field +
                             "' is not a number: '" + raw.text + "'",
                         raw.line, field);
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

/// Pulls typed values out of one section, remembering which keys were read so
/// leftovers can be reported as parse errors.
class SectionReader {
public:
    SectionReader(const Document& doc, std::string section, const std::string& origin,
                  std::vector<std::string>& problems)
        : origin_(origin), section_(std::move(section)), problems_(problems) {
        const auto it = doc.find(section_);
        if (it != doc.end()) {
            present_ = true;
            entries_ = it->second;
        }
    }

    bool present() const { return present_; }

    std::optional<double> number(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        consumed_.insert(key);
        return parse_number(it->second, section_ + "." + key, origin_);
    }

    double required_number(const std::string& key) {
        if (auto v = number(key)) {
            return *v;
        }
        problems_.push_back("missing field " + section_ + "." + key);
        return 0.0;
    }

    std::optional<std::string> word(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        consumed_.insert(key);
        return it->second.text;
    }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void finish() {
        for (const auto& [key, raw] : entries_) {
            if (!consumed_.count(key)) {
                throw ParseError(origin_ + ":" + std::to_string(raw.line) + ": unknown key '" +
                                     section_ + "." + key + "'",
                                 raw.line, section_ + "." + key);
            }
        }
    }

    const Section& entries() const { return entries_; }

private:
    const std::string& origin_;
    std::string section_;
    std::vector<std::string>& problems_;
    Section entries_;
    std::set<std::string> consumed_;
    bool present_ = false;
};

std::string stem_of(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) {
        base.erase(dot);
    }
    return base;
}

const std::map<std::string, Artifact>& artifact_names() {
    static const std::map<std::string, Artifact> names = {
        {"trajectory_csv", Artifact::TrajectoryCsv},   {"events_csv", Artifact::EventsCsv},
        {"metrics_json", Artifact::MetricsJson},       {"lyapunov_csv", Artifact::LyapunovCsv},
        {"certificate_json", Artifact::CertificateJson},
    };
    return names;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text, const std::string& origin) {
    const Document doc = tokenize(text, origin);
    for (const auto& [name, _] : doc) {
        if (name != "target" && name != "initial" && name != "guidance" && name != "estimator" &&
            name != "sim" && name != "output" && name != "sweep") {
            throw ParseError(origin + ": unknown section '[" + name + "]'", 0, name);
        }
    }

    std::vector<std::string> problems;
    ScenarioFile sc;
    sc.name = stem_of(origin);

    SectionReader target(doc, "target", origin, problems);
    sc.target.x = target.required_number("x");
    sc.target.y = target.required_number("y");
    target.finish();

    SectionReader initial(doc, "initial", origin, problems);
    sc.initial.x = initial.required_number("x");
    sc.initial.y = initial.required_number("y");
    sc.initial.psi = initial.required_number("psi");
    initial.finish();

    SectionReader guidance(doc, "guidance", origin, problems);
    sc.r_d = guidance.required_number("r_d");
    sc.k = guidance.required_number("k");
    sc.V = guidance.required_number("V");
    guidance.finish();

    SectionReader estimator(doc, "estimator", origin, problems);
    if (estimator.present()) {
        ScenarioFile::EstimatorSection est;
        est.k1 = estimator.required_number("k1");
        est.k2 = estimator.required_number("k2");
        est.k3 = estimator.required_number("k3");
        est.xhat1_init = estimator.number("xhat1");
        est.xhat2_init = estimator.number("xhat2");
        if (auto mode = estimator.word("reset_mode")) {
            if (*mode == "theory") {
                est.reset_radius = ResetRadius::AimRadius;
            } else if (*mode == "paper") {
                est.reset_radius = ResetRadius::DesiredRadius;
            } else {
                problems.push_back("estimator.reset_mode must be 'theory' or 'paper', got '" +
                                   *mode + "'");
            }
        }
        estimator.finish();
        sc.estimator = est;
    }

    SectionReader sim(doc, "sim", origin, problems);
    if (auto v = sim.word("controller")) {
        if (*v == "full_information") {
            sc.controller = ControllerMode::FullInformation;
        } else if (*v == "output_feedback") {
            sc.controller = ControllerMode::OutputFeedback;
        } else {
            problems.push_back("sim.controller must be 'full_information' or 'output_feedback'");
        }
    }
    if (auto v = sim.word("formulation")) {
        if (*v == "cartesian") {
            sc.formulation = Formulation::Cartesian;
        } else if (*v == "polar") {
            sc.formulation = Formulation::Polar;
        } else {
            problems.push_back("sim.formulation must be 'cartesian' or 'polar'");
        }
    }
    sc.step = sim.number("step").value_or(sc.step);
    sc.duration = sim.number("duration").value_or(sc.duration);
    sc.event_tolerance = sim.number("event_tolerance").value_or(sc.event_tolerance);
    sc.settling_band = sim.number("settling_band").value_or(sc.settling_band);
    sim.finish();

    SectionReader output(doc, "output", origin, problems);
    sc.output_prefix = output.word("prefix").value_or(sc.name);
    if (auto emit = output.word("emit")) {
        for (const std::string& token : split_list(*emit)) {
            const auto it = artifact_names().find(token);
            if (it == artifact_names().end()) {
                throw ParseError(origin + ":" + std::to_string(output.line_of("emit")) +
                                     ": unknown artifact '" + token + "'",
                                 output.line_of("emit"), "output.emit");
            }
            sc.emit.insert(it->second);
        }
    } else {
        sc.emit = {Artifact::TrajectoryCsv, Artifact::EventsCsv, Artifact::MetricsJson};
    }
    output.finish();

    if (const auto it = doc.find("sweep"); it != doc.end()) {
        for (const auto& [field, raw] : it->second) {
            SweepAxis axis;
            axis.field = field;
            for (const std::string& token : split_list(raw.text)) {
                axis.values.push_back(parse_number(RawValue{token, raw.line}, field, origin));
            }
            if (axis.values.empty()) {
                problems.push_back("sweep axis '" + field + "' has no values");
            }
            sc.sweep.push_back(std::move(axis));
        }
    }

    if (sc.controller == ControllerMode::OutputFeedback && !sc.estimator) {
        problems.push_back("controller 'output_feedback' requires an [estimator] section");
    }
    if (sc.step <= 0.0) {
        problems.push_back("sim.step must be positive");
    }
    if (sc.duration <= 0.0) {
        problems.push_back("sim.duration must be positive");
    }
    if (sc.event_tolerance <= 0.0) {
        problems.push_back("sim.event_tolerance must be positive");
    }
    if (sc.settling_band <= 0.0) {
        problems.push_back("sim.settling_band must be positive");
    }
    // Sweep fields must address known numeric fields; probe on a copy.
    for (const SweepAxis& axis : sc.sweep) {
        ScenarioFile probe = sc;
        probe.sweep.clear();
        try {
            apply_field(probe, axis.field, axis.values.empty() ? 0.0 : axis.values.front());
        } catch (const ValidationError& e) {
            problems.insert(problems.end(), e.violations.begin(), e.violations.end());
        }
    }

    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
    return sc;
}

ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path, 0, path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

SimConfig ScenarioFile::make_config() const {
    SimConfig cfg;
    cfg.target = target;
    cfg.initial_state = initial;
    cfg.guidance = make_guidance_params(r_d, k, V);
    if (estimator) {
        cfg.estimator = EstimatorParams{estimator->k1,          estimator->k2,
                                        estimator->k3,          estimator->reset_radius,
                                        estimator->xhat1_init,  estimator->xhat2_init};
    }
    cfg.controller_mode = controller;
    cfg.formulation = formulation;
    cfg.step_size = step;
    cfg.duration = duration;
    cfg.event_tolerance = event_tolerance;
    cfg.settling_band_fraction = settling_band;
    return cfg;
}

void apply_field(ScenarioFile& scenario, const std::string& field, double value) {
    auto estimator_field = [&](double ScenarioFile::EstimatorSection::*member) {
        if (!scenario.estimator) {
            throw ValidationError({"sweep field '" + field + "' requires an [estimator] section"});
        }
        (*scenario.estimator).*member = value;
    };
    if (field == "target.x") {
        scenario.target.x = value;
    } else if (field == "target.y") {
        scenario.target.y = value;
    } else if (field == "initial.x") {
        scenario.initial.x = value;
    } else if (field == "initial.y") {
        scenario.initial.y = value;
    } else if (field == "initial.psi") {
        scenario.initial.psi = value;
    } else if (field == "guidance.r_d") {
        scenario.r_d = value;
    } else if (field == "guidance.k") {
        scenario.k = value;
    } else if (field == "guidance.V") {
        scenario.V = value;
    } else if (field == "estimator.k1") {
        estimator_field(&ScenarioFile::EstimatorSection::k1);
    } else if (field == "estimator.k2") {
        estimator_field(&ScenarioFile::EstimatorSection::k2);
    } else if (field == "estimator.k3") {
        estimator_field(&ScenarioFile::EstimatorSection::k3);
    } else if (field == "sim.step") {
        scenario.step = value;
    } else if (field == "sim.duration") {
        scenario.duration = value;
    } else if (field == "sim.event_tolerance") {
        scenario.event_tolerance = value;
    } else if (field == "sim.settling_band") {
        scenario.settling_band = value;
    } else {
        throw ValidationError({"unknown sweep field '" + field + "'"});
    }
}

std::vector<ScenarioFile> expand_sweep(const ScenarioFile& scenario) {
    if (scenario.sweep.empty()) {
        throw ValidationError({"scenario defines no sweep grid"});
    }
    std::size_t total = 1;
    for (const SweepAxis& axis : scenario.sweep) {
        total *= axis.values.size();
    }
    std::vector<ScenarioFile> points;
    points.reserve(total);
    for (std::size_t index = 0; index < total; ++index) {
        ScenarioFile point = scenario;
        point.sweep.clear();
        // Row-major: the last axis varies fastest.
        std::size_t rest = index;
        for (std::size_t a = scenario.sweep.size(); a-- > 0;) {
            const SweepAxis& axis = scenario.sweep[a];
            const std::size_t pos = rest % axis.values.size();
            rest /= axis.values.size();
            apply_field(point, axis.field, axis.values[pos]);
        }
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace circumnav

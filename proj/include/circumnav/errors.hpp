#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace circumnav {

/// UAV coincides with the target; the polar form is singular there.
struct ZeroRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// locate_crossing called on a step whose endpoints are on the same side of the aim circle.
struct NoCrossing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gain set violates a hard constraint (nonpositive gain, aim-radius radicand <= 0).
struct InvalidGain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strict-mode run refused because the gain validation report carries failures.
struct GainConditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AlreadyFrozen : std::logic_error {
    using std::logic_error::logic_error;
};

struct NotFrozen : std::logic_error {
    using std::logic_error::logic_error;
};

/// Argument outside the domain of an analysis function (e.g. r < r_a).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario file could not be parsed; carries line and field context.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_no, std::string field_name)
        : std::runtime_error(msg), line(line_no), field(std::move(field_name)) {}
    int line;
    std::string field;
};

/// Scenario parsed but is semantically invalid; lists every violation at once.
struct ValidationError : std::runtime_error {
    explicit ValidationError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), violations(std::move(problems)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "scenario validation failed:";
        for (const auto& s : v) {
            out += "\n  - " + s;
        }
        return out;
    }
};

}  // namespace circumnav

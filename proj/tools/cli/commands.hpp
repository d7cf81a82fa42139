#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cvqt::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationError = 1,
    kCertificateError = 2,
    kReproductionMismatch = 3,
    kInternalError = 4,
};

/// One pinned comparison made by `reproduce`.
struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string relation; // "within": |value - target| <= tolerance; "at_most": value <= tolerance; "holds": value == 1
    bool pass = false;
};

Check within(std::string name, double value, double target, double tolerance);
Check at_most(std::string name, double value, double limit);
Check holds(std::string name, bool ok);

json to_json(const Check& c);

/// Runs a validated config. Artifacts go to the paths named in cfg; the
/// primary result goes to `out` when no file is named. Throws on failure.
ExitCode run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Error object written on failure: {"error": kind, "message": text}.
json error_json(const std::string& kind, const std::string& message);

void write_json_file(const std::string& path, const json& j);

} // namespace cvqt::cli

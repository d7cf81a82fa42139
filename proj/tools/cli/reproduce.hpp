#pragma once

#include <iosfwd>

#include "commands.hpp"

namespace cvqt::cli {

/// Preset runs for fig1..fig4 and the headline scalars. Writes CSV/JSON into
/// cfg.out_dir together with <figure>_checks.json; returns
/// kReproductionMismatch when any pinned check fails.
ExitCode run_reproduce(const RunConfig& cfg, json& manifest, std::ostream& out, std::ostream& err);

} // namespace cvqt::cli

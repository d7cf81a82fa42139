#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvqt/analysis.hpp"
#include "cvqt/channels.hpp"
#include "cvqt/fock.hpp"
#include "cvqt/serialization.hpp"

namespace cvqt::cli {

enum class Command { grid, average, acceptance, sweep, reproduce };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::grid;
    std::string figure; // reproduce only

    std::optional<ResourceKind> resource;
    std::optional<InputStateSpec> input;
    // Sweep inputs may instead be given as a family plus parameters.
    std::optional<std::string> family;
    std::optional<Complex> alpha;
    std::optional<std::vector<Complex>> amps;

    std::optional<double> threshold;
    std::vector<int> n_list;

    double step = 0.05;
    std::optional<double> half_width;
    std::optional<Complex> center;
    int bisection_levels = 4;

    double epsilon = kDefaultEpsilon;
    int hard_cap = kDefaultHardCap;
    bool closed_form = true;
    int threads = 0; // 0: CVQT_THREADS or hardware concurrency

    std::optional<std::string> out;
    std::optional<std::string> json_out;
    std::optional<std::string> manifest;
    std::string out_dir = ".";
};

/// "2..41", "2,5,9" or a mix such as "2..5,8". Throws DomainError.
std::vector<int> parse_n_list(std::string_view text);
/// Comma-separated complex numbers.
std::vector<Complex> parse_complex_list(std::string_view text);

/// Overlays the keys of a config-file object onto cfg. Unknown keys are rejected.
void apply_config_json(RunConfig& cfg, const json& j);

/// Checks every field against the preconditions of the command. Throws DomainError.
void validate(const RunConfig& cfg);

/// The input of a sweep, from --input or from family + alpha/amps.
InputStateSpec resolve_input(const RunConfig& cfg);

TruncationPolicy truncation_policy(const RunConfig& cfg);
GridOptions grid_options(const RunConfig& cfg);
QuadSpec quad_spec(const RunConfig& cfg);

json to_json(const RunConfig& cfg);

} // namespace cvqt::cli

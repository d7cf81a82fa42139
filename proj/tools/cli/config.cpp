#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "cvqt/displacement.hpp"
#include "cvqt/errors.hpp"

namespace cvqt::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

int parse_int(std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DomainError("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

Command parse_command(const std::string& s) {
    if (s == "grid") return Command::grid;
    if (s == "average") return Command::average;
    if (s == "acceptance") return Command::acceptance;
    if (s == "sweep") return Command::sweep;
    if (s == "reproduce") return Command::reproduce;
    throw DomainError("unknown command '" + s + "'");
}

double number(const json& j, const char* key) {
    if (!j.is_number()) {
        throw DomainError(std::string("config key '") + key + "' must be a number");
    }
    return j.get<double>();
}

int integer(const json& j, const char* key) {
    if (!j.is_number_integer()) {
        throw DomainError(std::string("config key '") + key + "' must be an integer");
    }
    return j.get<int>();
}

std::string text(const json& j, const char* key) {
    if (!j.is_string()) {
        throw DomainError(std::string("config key '") + key + "' must be a string");
    }
    return j.get<std::string>();
}

} // namespace

const char* command_name(Command c) {
    switch (c) {
    case Command::grid: return "grid";
    case Command::average: return "average";
    case Command::acceptance: return "acceptance";
    case Command::sweep: return "sweep";
    case Command::reproduce: return "reproduce";
    }
    return "?";
}

std::vector<int> parse_n_list(std::string_view s) {
    std::vector<int> out;
    for (const std::string_view part : split(s, ',')) {
        if (part.empty()) {
            throw DomainError("empty entry in N list");
        }
        const std::size_t dots = part.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(parse_int(part));
            continue;
        }
        const int lo = parse_int(part.substr(0, dots));
        const int hi = parse_int(part.substr(dots + 2));
        if (hi < lo) {
            throw DomainError("N range '" + std::string(part) + "' is descending");
        }
        if (hi - lo > 100000) {
            throw DomainError("N range '" + std::string(part) + "' is too long");
        }
        for (int n = lo; n <= hi; ++n) {
            out.push_back(n);
        }
    }
    return out;
}

std::vector<Complex> parse_complex_list(std::string_view s) {
    std::vector<Complex> out;
    for (const std::string_view part : split(s, ',')) {
        out.push_back(parse_complex(part));
    }
    return out;
}

void apply_config_json(RunConfig& cfg, const json& j) {
    static const std::set<std::string> known = {
        "command", "figure", "resource", "input", "family", "alpha", "amps", "threshold",
        "N", "step", "half_width", "center", "bisection_levels", "epsilon", "hard_cap",
        "closed_form", "threads", "out", "json", "manifest", "out_dir"};
    if (!j.is_object()) {
        throw DomainError("config file must hold a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw DomainError("unknown config key '" + key + "'");
        }
    }
    if (j.contains("command")) cfg.command = parse_command(text(j["command"], "command"));
    if (j.contains("figure")) cfg.figure = text(j["figure"], "figure");
    if (j.contains("resource")) {
        cfg.resource = j["resource"].is_string() ? parse_resource(j["resource"].get<std::string>())
                                                 : resource_from_json(j["resource"]);
    }
    if (j.contains("input")) {
        cfg.input = j["input"].is_string() ? parse_input(j["input"].get<std::string>())
                                           : input_from_json(j["input"]);
    }
    if (j.contains("family")) cfg.family = text(j["family"], "family");
    if (j.contains("alpha")) cfg.alpha = complex_from_json(j["alpha"]);
    if (j.contains("amps")) {
        if (!j["amps"].is_array()) {
            throw DomainError("config key 'amps' must be an array");
        }
        std::vector<Complex> amps;
        for (const auto& a : j["amps"]) {
            amps.push_back(complex_from_json(a));
        }
        cfg.amps = std::move(amps);
    }
    if (j.contains("threshold")) cfg.threshold = number(j["threshold"], "threshold");
    if (j.contains("N")) {
        const json& n = j["N"];
        if (n.is_string()) {
            cfg.n_list = parse_n_list(n.get<std::string>());
        } else if (n.is_array()) {
            cfg.n_list.clear();
            for (const auto& v : n) {
                cfg.n_list.push_back(integer(v, "N"));
            }
        } else {
            cfg.n_list = {integer(n, "N")};
        }
    }
    if (j.contains("step")) cfg.step = number(j["step"], "step");
    if (j.contains("half_width")) cfg.half_width = number(j["half_width"], "half_width");
    if (j.contains("center")) cfg.center = complex_from_json(j["center"]);
    if (j.contains("bisection_levels")) cfg.bisection_levels = integer(j["bisection_levels"], "bisection_levels");
    if (j.contains("epsilon")) cfg.epsilon = number(j["epsilon"], "epsilon");
    if (j.contains("hard_cap")) cfg.hard_cap = integer(j["hard_cap"], "hard_cap");
    if (j.contains("closed_form")) {
        if (!j["closed_form"].is_boolean()) {
            throw DomainError("config key 'closed_form' must be a boolean");
        }
        cfg.closed_form = j["closed_form"].get<bool>();
    }
    if (j.contains("threads")) cfg.threads = integer(j["threads"], "threads");
    if (j.contains("out")) cfg.out = text(j["out"], "out");
    if (j.contains("json")) cfg.json_out = text(j["json"], "json");
    if (j.contains("manifest")) cfg.manifest = text(j["manifest"], "manifest");
    if (j.contains("out_dir")) cfg.out_dir = text(j["out_dir"], "out_dir");
}

InputStateSpec resolve_input(const RunConfig& cfg) {
    if (cfg.input) {
        if (cfg.family) {
            throw DomainError("give either an input spec or a family, not both");
        }
        return *cfg.input;
    }
    if (!cfg.family) {
        throw DomainError("an input state is required (--input, or --family for sweeps)");
    }
    const std::string& f = *cfg.family;
    if (f == "coherent" || f == "cat") {
        if (!cfg.alpha) {
            throw DomainError("family '" + f + "' needs --alpha");
        }
        if (f == "coherent") {
            return CoherentInput{*cfg.alpha};
        }
        return CatInput{*cfg.alpha};
    }
    if (f == "qubit") {
        if (!cfg.amps || cfg.amps->size() != 2) {
            throw DomainError("family 'qubit' needs --amps a,b");
        }
        return QubitInput{(*cfg.amps)[0], (*cfg.amps)[1]};
    }
    if (f == "custom") {
        if (!cfg.amps || cfg.amps->empty()) {
            throw DomainError("family 'custom' needs --amps c0,c1,...");
        }
        return CustomInput{*cfg.amps};
    }
    throw DomainError("unknown input family '" + f + "'");
}

void validate(const RunConfig& cfg) {
    const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_positive(cfg.step)) {
        throw DomainError("step must be a positive finite number");
    }
    if (cfg.half_width && !finite_positive(*cfg.half_width)) {
        throw DomainError("half-width must be a positive finite number");
    }
    if (cfg.center && !(std::isfinite(cfg.center->real()) && std::isfinite(cfg.center->imag()))) {
        throw DomainError("center must be finite");
    }
    if (cfg.bisection_levels < 0 || cfg.bisection_levels > 12) {
        throw DomainError("bisection levels must lie in [0, 12]");
    }
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    if (cfg.hard_cap < 1 || cfg.hard_cap > kWorkingCutoffLimit) {
        throw DomainError("hard cap must lie in [1, 1024]");
    }
    if (cfg.threads < 0) {
        throw DomainError("threads must be non-negative");
    }
    if (cfg.command == Command::reproduce) {
        static const std::set<std::string> figures = {"fig1", "fig2", "fig3", "fig4", "headline"};
        if (!figures.contains(cfg.figure)) {
            throw DomainError("unknown figure '" + cfg.figure + "' (fig1, fig2, fig3, fig4, headline)");
        }
        return;
    }
    if (cfg.command != Command::sweep && !cfg.resource) {
        throw DomainError(std::string(command_name(cfg.command)) + " needs --resource");
    }
    if (cfg.resource) {
        // Building the spectrum runs all of its checks.
        (void)ResourceSpectrum(*cfg.resource, cfg.epsilon, cfg.hard_cap);
    }
    if (cfg.command == Command::sweep && cfg.resource) {
        throw DomainError("sweep varies a MEND resource; --resource is not accepted");
    }
    const InputStateSpec input = resolve_input(cfg);
    (void)realize(input, truncation_policy(cfg));
    if (cfg.command == Command::acceptance) {
        if (!cfg.threshold) {
            throw DomainError("acceptance needs --threshold");
        }
        if (!(*cfg.threshold >= 0.0 && *cfg.threshold < 1.0)) {
            throw DomainError("acceptance threshold must lie in [0, 1)");
        }
    }
    if (cfg.command == Command::sweep) {
        if (!cfg.threshold) {
            throw DomainError("sweep needs --threshold");
        }
        if (!(*cfg.threshold > 0.0 && *cfg.threshold < 1.0)) {
            throw DomainError("sweep threshold must lie in (0, 1)");
        }
        if (cfg.n_list.empty()) {
            throw DomainError("sweep needs a non-empty --N list");
        }
        for (const int n : cfg.n_list) {
            if (n < 1 || n - 1 > cfg.hard_cap) {
                throw DomainError("MEND truncation number " + std::to_string(n) + " is out of range");
            }
        }
    } else if (!cfg.n_list.empty()) {
        throw DomainError("--N only applies to sweep");
    }
    if (cfg.command == Command::grid && cfg.threshold) {
        throw DomainError("--threshold does not apply to grid");
    }
}

TruncationPolicy truncation_policy(const RunConfig& cfg) { return {cfg.epsilon, cfg.hard_cap}; }

GridOptions grid_options(const RunConfig& cfg) {
    GridOptions g;
    g.closed_form_fast_path = cfg.closed_form;
    g.threads = cfg.threads;
    g.truncation = truncation_policy(cfg);
    return g;
}

QuadSpec quad_spec(const RunConfig& cfg) {
    QuadSpec q;
    q.step = cfg.step;
    q.half_width = cfg.half_width;
    q.center = cfg.center;
    q.bisection_levels = cfg.bisection_levels;
    q.grid = grid_options(cfg);
    return q;
}

json to_json(const RunConfig& cfg) {
    json j{{"command", command_name(cfg.command)},
           {"step", cfg.step},
           {"bisection_levels", cfg.bisection_levels},
           {"epsilon", cfg.epsilon},
           {"hard_cap", cfg.hard_cap},
           {"closed_form", cfg.closed_form},
           {"threads", cfg.threads}};
    if (cfg.command == Command::reproduce) {
        j["figure"] = cfg.figure;
        j["out_dir"] = cfg.out_dir;
    }
    if (cfg.resource) j["resource"] = cvqt::to_json(*cfg.resource);
    if (cfg.input) j["input"] = cvqt::to_json(*cfg.input);
    if (cfg.family) j["family"] = *cfg.family;
    if (cfg.alpha) j["alpha"] = complex_to_json(*cfg.alpha);
    if (cfg.amps) {
        json a = json::array();
        for (const Complex z : *cfg.amps) {
            a.push_back(complex_to_json(z));
        }
        j["amps"] = a;
    }
    if (cfg.threshold) j["threshold"] = *cfg.threshold;
    if (!cfg.n_list.empty()) j["N"] = cfg.n_list;
    if (cfg.half_width) j["half_width"] = *cfg.half_width;
    if (cfg.center) j["center"] = complex_to_json(*cfg.center);
    if (cfg.out) j["out"] = *cfg.out;
    if (cfg.json_out) j["json"] = *cfg.json_out;
    if (cfg.manifest) j["manifest"] = *cfg.manifest;
    return j;
}

} // namespace cvqt::cli

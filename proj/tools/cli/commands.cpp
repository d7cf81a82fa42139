#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "cvqt/displacement.hpp"
#include "cvqt/errors.hpp"
#include "cvqt/parallel.hpp"
#include "reproduce.hpp"

namespace cvqt::cli {
namespace {

constexpr double kDefaultHalfWidth = 6.0;

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DomainError("cannot open '" + path + "' for writing");
    }
    return f;
}

std::optional<std::string> manifest_path(const RunConfig& cfg) {
    if (cfg.manifest) {
        return cfg.manifest;
    }
    if (cfg.out) {
        return *cfg.out + ".manifest.json";
    }
    if (cfg.json_out) {
        return *cfg.json_out + ".manifest.json";
    }
    return std::nullopt;
}

json policy_json(const RunConfig& cfg) {
    const GridOptions g = grid_options(cfg);
    return json{{"epsilon", cfg.epsilon},
                {"hard_cap", cfg.hard_cap},
                {"working_cutoff_limit", kWorkingCutoffLimit},
                {"probability_floor", kProbabilityFloor},
                {"coverage_error_ratio", kCoverageErrorRatio},
                {"closed_form_fast_path", g.closed_form_fast_path},
                {"cross_check_stride", g.cross_check_stride},
                {"cross_check_tolerance", g.cross_check_tolerance},
                {"threads", cfg.threads > 0 ? cfg.threads : default_thread_count()}};
}

json resource_json(const ResourceSpectrum& r) {
    json j = cvqt::to_json(r);
    j["label"] = r.label();
    j["cutoff"] = r.cutoff();
    j["tail_mass"] = r.tail_mass();
    return j;
}

json input_json(const InputStateSpec& spec, const RunConfig& cfg) {
    const FockVector psi = realize(spec, truncation_policy(cfg));
    json j = cvqt::to_json(spec);
    j["cutoff"] = psi.cutoff();
    j["truncation_tail"] = psi.truncation_tail();
    return j;
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const std::string& w : warnings) {
        err << "warning: " << w << '\n';
    }
}

ExitCode run_grid(const RunConfig& cfg, json& manifest, std::ostream& out, std::ostream& err) {
    const ResourceSpectrum r(*cfg.resource, cfg.epsilon, cfg.hard_cap);
    const InputStateSpec input = resolve_input(cfg);
    const GridSpec spec = GridSpec::centered(cfg.center.value_or(distribution_center(input)),
                                             cfg.half_width.value_or(kDefaultHalfWidth), cfg.step);
    const DistributionGrid g = compute_grid(r, input, spec, grid_options(cfg));
    report_warnings(g.warnings, err);
    if (cfg.out) {
        std::ofstream f = open_output(*cfg.out);
        write_grid_csv(f, g);
        manifest["artifacts"].push_back(*cfg.out);
    } else {
        write_grid_csv(out, g);
    }
    if (cfg.json_out) {
        write_json_file(*cfg.json_out, cvqt::to_json(g));
        manifest["artifacts"].push_back(*cfg.json_out);
    }
    manifest["resource"] = resource_json(r);
    manifest["input"] = input_json(input, cfg);
    manifest["results"] = grid_metadata(g);
    manifest["warnings"] = g.warnings;
    return kOk;
}

template <class Result>
ExitCode emit_scalar(const RunConfig& cfg, const Result& res, json& manifest, std::ostream& out) {
    const json j = cvqt::to_json(res);
    out << j.dump(2) << '\n';
    if (cfg.json_out) {
        write_json_file(*cfg.json_out, j);
        manifest["artifacts"].push_back(*cfg.json_out);
    }
    manifest["results"] = j;
    manifest["warnings"] = res.warnings;
    return kOk;
}

ExitCode run_average(const RunConfig& cfg, json& manifest, std::ostream& out, std::ostream& err) {
    const ResourceSpectrum r(*cfg.resource, cfg.epsilon, cfg.hard_cap);
    const InputStateSpec input = resolve_input(cfg);
    const AverageResult res = average_fidelity(r, input, quad_spec(cfg));
    report_warnings(res.warnings, err);
    manifest["resource"] = resource_json(r);
    manifest["input"] = input_json(input, cfg);
    return emit_scalar(cfg, res, manifest, out);
}

ExitCode run_acceptance(const RunConfig& cfg, json& manifest, std::ostream& out, std::ostream& err) {
    const ResourceSpectrum r(*cfg.resource, cfg.epsilon, cfg.hard_cap);
    const InputStateSpec input = resolve_input(cfg);
    const AcceptanceResult res = acceptance_probability(r, input, *cfg.threshold, quad_spec(cfg));
    report_warnings(res.warnings, err);
    manifest["resource"] = resource_json(r);
    manifest["input"] = input_json(input, cfg);
    json j = cvqt::to_json(res);
    j["threshold"] = *cfg.threshold;
    out << j.dump(2) << '\n';
    if (cfg.json_out) {
        write_json_file(*cfg.json_out, j);
        manifest["artifacts"].push_back(*cfg.json_out);
    }
    manifest["results"] = j;
    manifest["warnings"] = res.warnings;
    return kOk;
}

ExitCode run_sweep(const RunConfig& cfg, json& manifest, std::ostream& out, std::ostream& err) {
    const InputStateSpec input = resolve_input(cfg);
    const SweepResult res = sweep_threshold_probability(input, *cfg.threshold, cfg.n_list, quad_spec(cfg));
    for (const SweepRow& row : res.rows) {
        if (row.error) {
            err << "warning: N=" << row.n << ": " << *row.error << '\n';
        }
    }
    if (!res.monotone()) {
        err << "warning: acceptance probability decreases beyond its error bars at "
            << res.trend_violations.size() << " step(s)\n";
    }
    if (cfg.out) {
        std::ofstream f = open_output(*cfg.out);
        write_sweep_csv(f, res);
        manifest["artifacts"].push_back(*cfg.out);
    } else if (!cfg.json_out) {
        write_sweep_csv(out, res);
    }
    const json j = cvqt::to_json(res);
    if (cfg.json_out) {
        write_json_file(*cfg.json_out, j);
        manifest["artifacts"].push_back(*cfg.json_out);
    }
    manifest["input"] = input_json(input, cfg);
    manifest["results"] = j;
    return kOk;
}

} // namespace

Check within(std::string name, double value, double target, double tolerance) {
    return {std::move(name), value, target, tolerance, "within", std::abs(value - target) <= tolerance};
}

Check at_most(std::string name, double value, double limit) {
    return {std::move(name), value, 0.0, limit, "at_most", value <= limit};
}

Check holds(std::string name, bool ok) {
    return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, "holds", ok};
}

json to_json(const Check& c) {
    return json{{"name", c.name},         {"value", c.value},       {"target", c.target},
                {"tolerance", c.tolerance}, {"relation", c.relation}, {"pass", c.pass}};
}

json error_json(const std::string& kind, const std::string& message) {
    return json{{"error", kind}, {"message", message}};
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream f = open_output(path);
    f << j.dump(2) << '\n';
    if (!f) {
        throw DomainError("failed writing '" + path + "'");
    }
}

ExitCode run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    json manifest{{"schema", "cvqt-manifest/1"},
                  {"version", "0.1.0"},
                  {"command", command_name(cfg.command)},
                  {"config", to_json(cfg)},
                  {"policy", policy_json(cfg)},
                  {"artifacts", json::array()}};
    ExitCode code = kOk;
    std::optional<std::string> path = manifest_path(cfg);
    switch (cfg.command) {
    case Command::grid: code = run_grid(cfg, manifest, out, err); break;
    case Command::average: code = run_average(cfg, manifest, out, err); break;
    case Command::acceptance: code = run_acceptance(cfg, manifest, out, err); break;
    case Command::sweep: code = run_sweep(cfg, manifest, out, err); break;
    case Command::reproduce:
        code = run_reproduce(cfg, manifest, out, err);
        if (!path) {
            path = cfg.out_dir + "/" + cfg.figure + "_manifest.json";
        }
        break;
    }
    manifest["exit_code"] = static_cast<int>(code);
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (path) {
        write_json_file(*path, manifest);
    }
    return code;
}

} // namespace cvqt::cli

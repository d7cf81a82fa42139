#include "app.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <ostream>

#include "commands.hpp"
#include "config.hpp"
#include "cvqt/errors.hpp"

namespace cvqt::cli {
namespace {

// Raw flag values; only flags that were given override the config file.
struct Flags {
    std::string config;
    std::string resource, input, family, alpha, amps, center, n_list, out, json_out, manifest, out_dir, figure;
    double threshold = 0.0, step = 0.0, half_width = 0.0, epsilon = 0.0;
    int hard_cap = 0, threads = 0, bisection_levels = 0;
    bool no_closed_form = false;
};

void add_shared(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; flags override its keys");
    sub->add_option("--step", f.step, "Grid / quadrature step (default 0.05)");
    sub->add_option("--half-width", f.half_width, "Half-width of the square beta domain");
    sub->add_option("--center", f.center, "Domain center, complex a+bi");
    sub->add_option("--epsilon", f.epsilon, "Fock truncation tail (default 1e-12)");
    sub->add_option("--hard-cap", f.hard_cap, "Largest admissible Fock cutoff (default 512)");
    sub->add_option("--threads", f.threads, "Worker threads (default: CVQT_THREADS or all cores)");
    sub->add_option("--manifest", f.manifest, "Run-manifest JSON path");
}

void add_state(CLI::App* sub, Flags& f) {
    sub->add_option("--resource", f.resource, "mend:N | tmsv:lambda | custom:d0,d1,...");
    sub->add_option("--input", f.input, "coherent:z | cat:z | qubit:a,b | custom:c0,c1,...");
    sub->add_option("--family", f.family, "Input family: coherent, cat, qubit, custom");
    sub->add_option("--alpha", f.alpha, "Coherent / cat amplitude, complex a+bi");
    sub->add_option("--amps", f.amps, "Qubit or custom amplitudes, comma separated");
    sub->add_flag("--no-closed-form", f.no_closed_form, "Evaluate every point through the pipeline");
}

void add_quadrature(CLI::App* sub, Flags& f) {
    sub->add_option("--bisection-levels", f.bisection_levels, "Contour refinement depth (default 4)");
}

RunConfig build_config(const CLI::App& app, const CLI::App& sub, const Flags& f) {
    RunConfig cfg;
    const std::string name = sub.get_name();
    const auto given = [&](const char* opt) {
        const CLI::Option* o = sub.get_option_no_throw(opt);
        return o != nullptr && o->count() > 0;
    };
    if (given("--config")) {
        std::ifstream in(f.config);
        if (!in) {
            throw DomainError("cannot read config file '" + f.config + "'");
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw DomainError("config file is not valid JSON: " + std::string(e.what()));
        }
        apply_config_json(cfg, j);
        if (j.contains("command") && command_name(cfg.command) != name) {
            throw DomainError("config file command '" + std::string(command_name(cfg.command)) +
                              "' does not match subcommand '" + name + "'");
        }
    }
    (void)app;
    static const std::map<std::string, Command> commands = {{"grid", Command::grid},
                                                            {"average", Command::average},
                                                            {"acceptance", Command::acceptance},
                                                            {"sweep", Command::sweep},
                                                            {"reproduce", Command::reproduce}};
    cfg.command = commands.at(name);
    if (given("figure")) cfg.figure = f.figure;
    if (given("--resource")) cfg.resource = parse_resource(f.resource);
    if (given("--input")) cfg.input = parse_input(f.input);
    if (given("--family")) cfg.family = f.family;
    if (given("--alpha")) cfg.alpha = parse_complex(f.alpha);
    if (given("--amps")) cfg.amps = parse_complex_list(f.amps);
    if (given("--threshold")) cfg.threshold = f.threshold;
    if (given("--N")) cfg.n_list = parse_n_list(f.n_list);
    if (given("--step")) cfg.step = f.step;
    if (given("--half-width")) cfg.half_width = f.half_width;
    if (given("--center")) cfg.center = parse_complex(f.center);
    if (given("--bisection-levels")) cfg.bisection_levels = f.bisection_levels;
    if (given("--epsilon")) cfg.epsilon = f.epsilon;
    if (given("--hard-cap")) cfg.hard_cap = f.hard_cap;
    if (given("--threads")) cfg.threads = f.threads;
    if (given("--no-closed-form")) cfg.closed_form = false;
    if (given("--out")) cfg.out = f.out;
    if (given("--json")) cfg.json_out = f.json_out;
    if (given("--manifest")) cfg.manifest = f.manifest;
    if (given("--out-dir")) cfg.out_dir = f.out_dir;
    return cfg;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Continuous-variable teleportation with truncated Fock resources", "cvqt"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* grid = app.add_subcommand("grid", "Fidelity and probability on a beta grid (CSV)");
    add_shared(grid, f);
    add_state(grid, f);
    grid->add_option("--out", f.out, "CSV output (default stdout)");
    grid->add_option("--json", f.json_out, "Full grid as JSON");

    CLI::App* average = app.add_subcommand("average", "Average fidelity over the outcome plane");
    add_shared(average, f);
    add_state(average, f);
    add_quadrature(average, f);
    average->add_option("--json", f.json_out, "Result JSON file (also printed)");

    CLI::App* acceptance = app.add_subcommand("acceptance", "Probability of an outcome with F above a threshold");
    add_shared(acceptance, f);
    add_state(acceptance, f);
    add_quadrature(acceptance, f);
    acceptance->add_option("--threshold", f.threshold, "Fidelity threshold in [0, 1)");
    acceptance->add_option("--json", f.json_out, "Result JSON file (also printed)");

    CLI::App* sweep = app.add_subcommand("sweep", "Acceptance probability against the MEND truncation number");
    add_shared(sweep, f);
    add_state(sweep, f);
    add_quadrature(sweep, f);
    sweep->add_option("--threshold", f.threshold, "Fidelity threshold in (0, 1)");
    sweep->add_option("--N", f.n_list, "Truncation numbers, e.g. 2..41 or 2,6,11");
    sweep->add_option("--out", f.out, "CSV output (default stdout)");
    sweep->add_option("--json", f.json_out, "Result JSON file");

    CLI::App* reproduce = app.add_subcommand("reproduce", "Preset runs with pinned checks");
    add_shared(reproduce, f);
    add_quadrature(reproduce, f);
    reproduce->add_option("figure", f.figure, "fig1 | fig2 | fig3 | fig4 | headline")->required();
    reproduce->add_option("--out-dir", f.out_dir, "Directory for artifacts (default .)");
    reproduce->add_option("--threshold", f.threshold, "fig4 threshold (default 0.99)");
    reproduce->add_option("--N", f.n_list, "fig4 truncation numbers (default 2..41)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage", e.what()).dump() << '\n';
        return kValidationError;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const RunConfig cfg = build_config(app, *sub, f);
        validate(cfg);
        return run(cfg, out, err);
    } catch (const CertificateError& e) {
        err << error_json("certificate", e.what()).dump() << '\n';
        return kCertificateError;
    } catch (const CutoffOverflow& e) {
        err << error_json("cutoff", e.what()).dump() << '\n';
        return kCertificateError;
    } catch (const DomainError& e) {
        err << error_json("validation", e.what()).dump() << '\n';
        return kValidationError;
    } catch (const json::exception& e) {
        err << error_json("validation", e.what()).dump() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << error_json("internal", e.what()).dump() << '\n';
        return kInternalError;
    }
}

} // namespace cvqt::cli

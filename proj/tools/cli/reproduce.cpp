#include "reproduce.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cvqt/errors.hpp"

namespace cvqt::cli {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFigureHalfWidth = 6.0;
// Coherent-state tail for closed-form comparisons; the agreement error scales
// like the square root of the truncated mass.
constexpr double kComparisonEpsilon = 1e-20;

const Complex kAlpha{0.0, 1.5};
const QubitInput kPlus{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};

struct Context {
    const RunConfig& cfg;
    json& manifest;
    std::ostream& err;
    std::vector<Check> checks;

    std::string path(const std::string& name) const {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    }

    void artifact(const std::string& p) { manifest["artifacts"].push_back(p); }

    DistributionGrid grid(const ResourceSpectrum& r, const InputStateSpec& input, const std::string& name,
                          GridOptions options) {
        const GridSpec spec = GridSpec::centered(cfg.center.value_or(distribution_center(input)),
                                                 cfg.half_width.value_or(kFigureHalfWidth), cfg.step);
        DistributionGrid g = compute_grid(r, input, spec, options);
        for (const std::string& w : g.warnings) {
            err << "warning: " << name << ": " << w << '\n';
        }
        const std::string p = path(name + ".csv");
        std::ofstream f(p, std::ios::binary);
        if (!f) {
            throw DomainError("cannot open '" + p + "' for writing");
        }
        write_grid_csv(f, g);
        artifact(p);
        manifest["results"][name] = grid_metadata(g);
        return g;
    }

    AverageResult average(const ResourceSpectrum& r, const InputStateSpec& input, const std::string& name) {
        QuadSpec q = quad_spec(cfg);
        q.half_width.reset();
        q.center.reset();
        AverageResult a = average_fidelity(r, input, q);
        manifest["results"][name] = cvqt::to_json(a);
        return a;
    }
};

double proportionality_defect(const DistributionGrid& g, int n) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.P.size(); ++i) {
        worst = std::max(worst, std::abs(g.F[i] - kPi * n * g.P[i]));
    }
    return worst;
}

void fidelity_bound_checks(Context& c, const std::string& name, const DistributionGrid& g) {
    c.checks.push_back(at_most(name + ": F - 1 before clipping", g.max_fidelity_excursion, 1e-8));
}

void fig1(Context& c) {
    GridOptions options = grid_options(c.cfg);
    options.closed_form_fast_path = false;
    options.truncation.epsilon = std::min(c.cfg.epsilon, kComparisonEpsilon);
    for (const int n : {6, 11, 21, 41}) {
        const ResourceSpectrum r = ResourceSpectrum::mend(n);
        const std::string name = "fig1_mend" + std::to_string(n);
        const DistributionGrid g = c.grid(r, CoherentInput{kAlpha}, name, options);
        double f_dev = 0.0;
        double p_dev = 0.0;
        double f_at_alpha = 0.0;
        double flat_min = 1.0;
        for (int j = 0; j < g.n_im(); ++j) {
            for (int i = 0; i < g.n_re(); ++i) {
                const Complex beta = g.beta(i, j);
                const std::size_t k = g.index(i, j);
                const double f = fidelity_coherent_mend(kAlpha, n, beta);
                f_dev = std::max(f_dev, std::abs(g.F[k] - f));
                p_dev = std::max(p_dev, kPi * std::abs(g.P[k] - f / (kPi * n)));
                if (std::abs(beta - kAlpha) < 1e-9) {
                    f_at_alpha = g.F[k];
                }
                if (std::abs(beta - kAlpha) <= 1.0) {
                    flat_min = std::min(flat_min, g.F[k]);
                }
            }
        }
        c.checks.push_back(within(name + ": F(alpha)", f_at_alpha, 1.0, 1e-10));
        c.checks.push_back(at_most(name + ": max |F - Poisson CDF|", f_dev, 1e-8));
        c.checks.push_back(at_most(name + ": max pi |P - F/(pi N)|", p_dev, 1e-8));
        c.checks.push_back(within(name + ": min F on |beta - alpha| <= 1", flat_min, 1.0, 1e-3));
        c.checks.push_back(at_most(name + ": max |F - pi N P| / (pi N)", proportionality_defect(g, n) / (kPi * n), 1e-9));
    }
}

void fig2(Context& c) {
    const InputStateSpec cat = CatInput{kAlpha};
    const ResourceSpectrum mend = ResourceSpectrum::mend(21);
    const ResourceSpectrum tmsv = ResourceSpectrum::two_mode_squeezed(0.85, c.cfg.epsilon);
    const DistributionGrid gm = c.grid(mend, cat, "fig2_mend21", grid_options(c.cfg));
    const DistributionGrid gt = c.grid(tmsv, cat, "fig2_tmsv0.85", grid_options(c.cfg));
    c.checks.push_back(at_most("fig2_mend21: max |F - pi N P| / (pi N)", proportionality_defect(gm, 21) / (kPi * 21), 1e-9));
    fidelity_bound_checks(c, "fig2_mend21", gm);
    fidelity_bound_checks(c, "fig2_tmsv0.85", gt);
    const AverageResult am = c.average(mend, cat, "fig2_mend21_average");
    const AverageResult at = c.average(tmsv, cat, "fig2_tmsv0.85_average");
    c.checks.push_back(within("fig2_mend21: integral of P", am.total_probability, 1.0, 1e-3));
    c.checks.push_back(within("fig2_tmsv0.85: integral of P", at.total_probability, 1.0, 1e-3));
}

void fig3(Context& c) {
    const ResourceSpectrum mend = ResourceSpectrum::mend(21);
    const ResourceSpectrum tmsv = ResourceSpectrum::two_mode_squeezed(0.8, c.cfg.epsilon);
    const DistributionGrid gm = c.grid(mend, kPlus, "fig3_mend21", grid_options(c.cfg));
    const DistributionGrid gt = c.grid(tmsv, kPlus, "fig3_tmsv0.8", grid_options(c.cfg));
    c.checks.push_back(at_most("fig3_mend21: max |F - pi N P| / (pi N)", proportionality_defect(gm, 21) / (kPi * 21), 1e-9));
    fidelity_bound_checks(c, "fig3_mend21", gm);
    fidelity_bound_checks(c, "fig3_tmsv0.8", gt);
    const AverageResult am = c.average(mend, kPlus, "fig3_mend21_average");
    const AverageResult at = c.average(tmsv, kPlus, "fig3_tmsv0.8_average");
    c.checks.push_back(within("fig3_mend21: integral of P", am.total_probability, 1.0, 1e-3));
    c.checks.push_back(within("fig3_tmsv0.8: integral of P", at.total_probability, 1.0, 1e-3));
    c.checks.push_back(within("fig3_mend21: average fidelity", am.value, 0.85, 0.01));
    c.checks.push_back(within("fig3_tmsv0.8: average fidelity", at.value, 0.86, 0.01));
    double f_max = 0.0;
    for (const double f : gt.F) {
        f_max = std::max(f_max, f);
    }
    c.checks.push_back(within("fig3_tmsv0.8: grid maximum of F", f_max, 0.99, 0.005));
}

void fig4(Context& c) {
    const double threshold = c.cfg.threshold.value_or(0.99);
    std::vector<int> n_list;
    for (int n = 2; n <= 41; ++n) {
        n_list.push_back(n);
    }
    if (!c.cfg.n_list.empty()) {
        n_list = c.cfg.n_list;
    }
    QuadSpec q = quad_spec(c.cfg);
    q.half_width.reset();
    q.center.reset();
    const std::vector<std::pair<std::string, InputStateSpec>> families = {
        {"coherent", CoherentInput{kAlpha}}, {"cat", CatInput{kAlpha}}, {"qubit", kPlus}};
    for (const auto& [family, input] : families) {
        const SweepResult s = sweep_threshold_probability(input, threshold, n_list, q);
        const std::string p = c.path("fig4_" + family + ".csv");
        std::ofstream f(p, std::ios::binary);
        if (!f) {
            throw DomainError("cannot open '" + p + "' for writing");
        }
        write_sweep_csv(f, s);
        c.artifact(p);
        c.manifest["results"]["fig4_" + family] = cvqt::to_json(s);
        bool rows_ok = true;
        for (const SweepRow& row : s.rows) {
            rows_ok = rows_ok && !row.error;
            if (family == "qubit" && row.n == 21) {
                c.checks.push_back(within("fig4_qubit: N = 21", row.acceptance_prob, 0.48, 0.02));
            }
        }
        c.checks.push_back(holds("fig4_" + family + ": every row evaluated", rows_ok));
        c.checks.push_back(holds("fig4_" + family + ": non-decreasing in N within error bars", s.monotone()));
    }
}

void headline(Context& c) {
    const ResourceSpectrum mend = ResourceSpectrum::mend(21);
    const ResourceSpectrum tmsv = ResourceSpectrum::two_mode_squeezed(0.8, c.cfg.epsilon);
    QuadSpec q = quad_spec(c.cfg);
    q.half_width.reset();
    q.center.reset();
    const AverageResult at = c.average(tmsv, kPlus, "average_tmsv0.8");
    const AverageResult am = c.average(mend, kPlus, "average_mend21");
    const AcceptanceResult acc = acceptance_probability(mend, kPlus, 0.99, q);
    c.manifest["results"]["acceptance_mend21"] = cvqt::to_json(acc);
    const MaxFidelityResult mx = max_fidelity(tmsv, kPlus, q);
    c.manifest["results"]["max_fidelity_tmsv0.8"] = cvqt::to_json(mx);
    c.checks.push_back(within("qubit, tmsv 0.8: average fidelity", at.value, 0.86, 0.01));
    c.checks.push_back(within("qubit, mend 21: average fidelity", am.value, 0.85, 0.01));
    c.checks.push_back(within("qubit, mend 21: P(F > 0.99)", acc.value, 0.48, 0.02));
    c.checks.push_back(within("qubit, tmsv 0.8: maximum fidelity", mx.fidelity, 0.99, 0.005));
}

} // namespace

ExitCode run_reproduce(const RunConfig& cfg, json& manifest, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
        throw DomainError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    }
    manifest["results"] = json::object();
    Context c{cfg, manifest, err, {}};
    if (cfg.figure == "fig1") fig1(c);
    else if (cfg.figure == "fig2") fig2(c);
    else if (cfg.figure == "fig3") fig3(c);
    else if (cfg.figure == "fig4") fig4(c);
    else headline(c);

    json checks = json::array();
    bool all = true;
    for (const Check& ch : c.checks) {
        checks.push_back(to_json(ch));
        all = all && ch.pass;
        std::ostringstream line;
        line << (ch.pass ? "PASS " : "FAIL ") << ch.name << ": " << std::setprecision(10) << ch.value;
        if (ch.relation == "within") {
            line << " (target " << ch.target << " +- " << ch.tolerance << ")";
        } else if (ch.relation == "at_most") {
            line << " (limit " << ch.tolerance << ")";
        }
        out << line.str() << '\n';
    }
    const std::string p = c.path(cfg.figure + "_checks.json");
    write_json_file(p, json{{"figure", cfg.figure}, {"pass", all}, {"checks", checks}});
    c.artifact(p);
    manifest["checks"] = checks;
    return all ? kOk : kReproductionMismatch;
}

} // namespace cvqt::cli

#include "cvqt/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cvqt/errors.hpp"
#include "cvqt/parallel.hpp"

namespace cvqt {
namespace {

constexpr double kTmsvCoverageLog = 18.420680743952367; // ln(1e8)

// The grid already carries the coverage warning; this escalates it.
void check_coverage(double ratio) {
    if (ratio > kCoverageErrorRatio) {
        std::ostringstream os;
        os << "integration domain misses probability mass: boundary P is " << ratio
           << " of P_max (limit " << kCoverageErrorRatio << ")";
        throw CertificateError(os.str());
    }
}

void check_grid_for_quadrature(const DistributionGrid& grid) {
    const double hr = grid.spec.re.step;
    const double hi = grid.spec.im.step;
    if (std::abs(hr - hi) > 1e-12 * std::max(hr, hi)) {
        throw DomainError("quadrature needs equal steps on both axes");
    }
    if ((grid.n_re() - 1) % 4 != 0 || (grid.n_im() - 1) % 4 != 0) {
        throw DomainError("quadrature needs interval counts divisible by 4");
    }
}

// Point evaluator for refinement: closed form when the grid used one.
class PointEvaluator {
public:
    PointEvaluator(const ResourceSpectrum& resource, const InputStateSpec& input,
                   const GridOptions& options)
        : resource_(resource), input_(input), psi_(realize(input, options.truncation)),
          fast_(options.closed_form_fast_path &&
                closed_form_point(resource, input, Complex{}).has_value()) {}

    PointValue operator()(Complex beta) const {
        if (fast_) {
            return *closed_form_point(resource_, input_, beta);
        }
        return evaluate_point(resource_, psi_, beta);
    }

private:
    const ResourceSpectrum& resource_;
    const InputStateSpec& input_;
    FockVector psi_;
    bool fast_;
};

struct Corner {
    double p = 0.0;
    bool in = false;
};

struct CellValue {
    double fine = 0.0;
    double coarse = 0.0;
    std::size_t evaluations = 0;
};

double leaf_estimate(const std::array<Corner, 4>& c, double area) {
    double s = 0.0;
    for (const auto& k : c) {
        s += k.in ? k.p : 0.0;
    }
    return area * s / 4.0;
}

// Corners ordered (x0,y0), (x1,y0), (x0,y1), (x1,y1).
CellValue refine_cell(const PointEvaluator& eval, const RegionPredicate& accept, double x0, double y0,
                      double h, const std::array<Corner, 4>& c, int depth, int levels) {
    const double area = h * h;
    const double leaf = leaf_estimate(c, area);
    if (depth > levels) {
        return {leaf, leaf, 0};
    }
    const double hh = 0.5 * h;
    auto sample = [&](double x, double y) {
        const PointValue v = eval(Complex{x, y});
        return Corner{std::max(0.0, v.probability), accept(v)};
    };
    const Corner bottom = sample(x0 + hh, y0);
    const Corner left = sample(x0, y0 + hh);
    const Corner mid = sample(x0 + hh, y0 + hh);
    const Corner right = sample(x0 + h, y0 + hh);
    const Corner top = sample(x0 + hh, y0 + h);
    const std::array<std::array<Corner, 4>, 4> sub = {{
        {c[0], bottom, left, mid},
        {bottom, c[1], mid, right},
        {left, mid, c[2], top},
        {mid, right, top, c[3]},
    }};
    const std::array<std::pair<double, double>, 4> origin = {
        {{x0, y0}, {x0 + hh, y0}, {x0, y0 + hh}, {x0 + hh, y0 + hh}}};
    CellValue total{0.0, 0.0, 5};
    for (int q = 0; q < 4; ++q) {
        const auto& sc = sub[q];
        const int inside = sc[0].in + sc[1].in + sc[2].in + sc[3].in;
        CellValue child;
        if (inside == 4 || inside == 0) {
            const double v = leaf_estimate(sc, hh * hh);
            child = {v, v, 0};
        } else {
            child = refine_cell(eval, accept, origin[q].first, origin[q].second, hh, sc, depth + 1,
                                levels);
        }
        total.fine += child.fine;
        total.coarse += child.coarse;
        total.evaluations += child.evaluations;
    }
    if (depth == levels) {
        total.coarse = leaf;
    }
    return total;
}

DistributionGrid grid_for(const ResourceSpectrum& resource, const InputStateSpec& input,
                          const QuadSpec& quad, Domain& domain) {
    domain = choose_domain(resource, input, quad);
    return compute_grid(resource, input, domain.grid(), quad.grid);
}

} // namespace

GridSpec Domain::grid() const {
    const double w = intervals_per_side * step;
    return GridSpec{{center.real() - w, center.real() + w, step},
                    {center.imag() - w, center.imag() + w, step}};
}

Domain choose_domain(const ResourceSpectrum& resource, const InputStateSpec& input,
                     const QuadSpec& quad) {
    if (!(quad.step > 0.0) || !std::isfinite(quad.step)) {
        throw DomainError("quadrature step must be positive");
    }
    if (quad.bisection_levels < 0 || quad.bisection_levels > 12) {
        throw DomainError("bisection levels must lie in [0, 12]");
    }
    Domain d;
    d.center = quad.center.value_or(distribution_center(input));
    d.step = quad.step;
    if (quad.half_width) {
        if (!(*quad.half_width > 0.0)) {
            throw DomainError("quadrature half-width must be positive");
        }
        d.half_width = *quad.half_width;
    } else {
        const double a = displacement_scale(input);
        double spread = 0.0;
        if (const auto* t = std::get_if<TwoModeSqueezed>(&resource.kind())) {
            spread = std::sqrt(kTmsvCoverageLog / (1.0 - t->lambda * t->lambda));
        } else if (const auto* m = std::get_if<Mend>(&resource.kind())) {
            spread = 3.0 + std::sqrt(static_cast<double>(m->n));
        } else {
            spread = 3.0 + std::sqrt(static_cast<double>(resource.cutoff() + 1));
        }
        d.half_width = std::max(6.0, a + spread);
    }
    d.intervals_per_side = 2 * static_cast<int>(std::ceil(d.half_width / (2.0 * d.step) - 1e-9));
    if (d.intervals_per_side < 2) {
        d.intervals_per_side = 2;
    }
    d.half_width = d.intervals_per_side * d.step;
    return d;
}

double simpson_2d(const std::vector<double>& values, int n_re, int n_im, double step, int stride) {
    if (stride < 1 || (n_re - 1) % (2 * stride) != 0 || (n_im - 1) % (2 * stride) != 0) {
        throw DomainError("simpson_2d: interval counts must be divisible by 2 * stride");
    }
    if (values.size() != std::size_t(n_re) * n_im) {
        throw DomainError("simpson_2d: sample count does not match grid");
    }
    auto weight = [](int j, int last) {
        if (j == 0 || j == last) {
            return 1.0;
        }
        return j % 2 == 1 ? 4.0 : 2.0;
    };
    const int last_re = (n_re - 1) / stride;
    const int last_im = (n_im - 1) / stride;
    double total = 0.0;
    for (int j = 0; j <= last_im; ++j) {
        const double wy = weight(j, last_im);
        double row = 0.0;
        for (int i = 0; i <= last_re; ++i) {
            row += weight(i, last_re) * values[std::size_t(j * stride) * n_re + i * stride];
        }
        total += wy * row;
    }
    const double h = step * stride;
    return total * h * h / 9.0;
}

AverageResult average_fidelity(const DistributionGrid& grid) {
    check_grid_for_quadrature(grid);
    std::vector<double> pf(grid.P.size());
    for (std::size_t i = 0; i < pf.size(); ++i) {
        pf[i] = grid.P[i] * grid.F[i];
    }
    const int nre = grid.n_re();
    const int nim = grid.n_im();
    const double h = grid.spec.re.step;
    AverageResult r;
    r.value = simpson_2d(pf, nre, nim, h, 1);
    r.coarse_value = simpson_2d(pf, nre, nim, h, 2);
    r.error_estimate = std::abs(r.value - r.coarse_value) / 15.0;
    r.total_probability = simpson_2d(grid.P, nre, nim, h, 1);
    r.total_probability_error =
        std::abs(r.total_probability - simpson_2d(grid.P, nre, nim, h, 2)) / 15.0;
    r.boundary_ratio = grid.boundary_ratio();
    r.warnings = grid.warnings;
    const double w = 0.5 * (grid.spec.re.max - grid.spec.re.min);
    r.domain = Domain{{grid.spec.re.min + w, grid.spec.im.min + 0.5 * (grid.spec.im.max - grid.spec.im.min)},
                      w, h, (nre - 1) / 2};
    check_coverage(r.boundary_ratio);
    return r;
}

AverageResult average_fidelity(const ResourceSpectrum& resource, const InputStateSpec& input,
                               const QuadSpec& quad) {
    Domain domain;
    const DistributionGrid grid = grid_for(resource, input, quad, domain);
    AverageResult r = average_fidelity(grid);
    r.domain = domain;
    return r;
}

double integrate_probability_squared(const DistributionGrid& grid) {
    check_grid_for_quadrature(grid);
    std::vector<double> p2(grid.P.size());
    std::transform(grid.P.begin(), grid.P.end(), p2.begin(), [](double p) { return p * p; });
    return simpson_2d(p2, grid.n_re(), grid.n_im(), grid.spec.re.step, 1);
}

AcceptanceResult region_probability(const ResourceSpectrum& resource, const InputStateSpec& input,
                                    const RegionPredicate& accept, const QuadSpec& quad) {
    Domain domain;
    const DistributionGrid grid = grid_for(resource, input, quad, domain);
    const PointEvaluator eval(resource, input, quad.grid);
    const int nre = grid.n_re();
    const int nim = grid.n_im();
    const double h = domain.step;

    std::vector<char> inside(grid.P.size());
    for (int j = 0; j < nim; ++j) {
        for (int i = 0; i < nre; ++i) {
            const std::size_t k = grid.index(i, j);
            PointValue v;
            v.beta = grid.beta(i, j);
            v.probability = grid.P[k];
            if (grid.P[k] >= kProbabilityFloor) {
                v.fidelity = grid.F[k];
            }
            inside[k] = accept(v) ? 1 : 0;
        }
    }

    // Cells wholly inside use the corner trapezoid; straddling cells are refined.
    double smooth = 0.0;
    std::vector<std::pair<int, int>> straddling;
    for (int j = 0; j + 1 < nim; ++j) {
        for (int i = 0; i + 1 < nre; ++i) {
            const std::size_t k00 = grid.index(i, j), k10 = grid.index(i + 1, j);
            const std::size_t k01 = grid.index(i, j + 1), k11 = grid.index(i + 1, j + 1);
            const int in = inside[k00] + inside[k10] + inside[k01] + inside[k11];
            if (in == 4) {
                smooth += 0.25 * h * h * (grid.P[k00] + grid.P[k10] + grid.P[k01] + grid.P[k11]);
            } else if (in > 0) {
                straddling.emplace_back(i, j);
            }
        }
    }
    // Trapezoid step-halving error of the wholly-inside part, measured on 2h
    // cells whose nine samples are all inside.
    double halving_diff = 0.0;
    for (int j = 0; j + 2 < nim; j += 2) {
        for (int i = 0; i + 2 < nre; i += 2) {
            bool all_in = true;
            double fine_t = 0.0;
            for (int b = 0; b <= 2 && all_in; ++b) {
                for (int a = 0; a <= 2; ++a) {
                    const std::size_t k = grid.index(i + a, j + b);
                    if (!inside[k]) {
                        all_in = false;
                        break;
                    }
                    const double wa = a == 1 ? 2.0 : 1.0;
                    const double wb = b == 1 ? 2.0 : 1.0;
                    fine_t += wa * wb * grid.P[k];
                }
            }
            if (!all_in) {
                continue;
            }
            fine_t *= 0.25 * h * h;
            const double coarse_t = h * h *
                (grid.P[grid.index(i, j)] + grid.P[grid.index(i + 2, j)] +
                 grid.P[grid.index(i, j + 2)] + grid.P[grid.index(i + 2, j + 2)]);
            halving_diff += fine_t - coarse_t;
        }
    }

    std::vector<CellValue> cells(straddling.size());
    parallel_for(
        straddling.size(),
        [&](std::size_t s) {
            const auto [i, j] = straddling[s];
            auto corner = [&](int a, int b) {
                const std::size_t k = grid.index(a, b);
                return Corner{grid.P[k], inside[k] != 0};
            };
            const std::array<Corner, 4> c = {corner(i, j), corner(i + 1, j), corner(i, j + 1),
                                             corner(i + 1, j + 1)};
            cells[s] = refine_cell(eval, accept, grid.spec.re.at(i), grid.spec.im.at(j), h, c, 1,
                                   quad.bisection_levels);
        },
        quad.grid.threads);

    AcceptanceResult r;
    r.domain = domain;
    r.refined_cells = straddling.size();
    double fine = 0.0;
    double coarse = 0.0;
    for (const auto& c : cells) {
        fine += c.fine;
        coarse += c.coarse;
        r.extra_points += c.evaluations;
    }
    r.value = std::clamp(smooth + fine, 0.0, 1.0);
    r.coarse_value = smooth + coarse;
    r.error_estimate = std::abs(fine - coarse) + std::abs(halving_diff) / 3.0;
    r.boundary_ratio = grid.boundary_ratio();
    r.warnings = grid.warnings;
    check_coverage(r.boundary_ratio);
    return r;
}

AcceptanceResult acceptance_probability(const ResourceSpectrum& resource,
                                        const InputStateSpec& input, double threshold,
                                        const QuadSpec& quad) {
    if (!(threshold >= 0.0 && threshold < 1.0)) {
        throw DomainError("acceptance threshold must lie in [0, 1)");
    }
    return region_probability(
        resource, input,
        [threshold](const PointValue& v) { return v.fidelity && *v.fidelity > threshold; }, quad);
}

MaxFidelityResult max_fidelity(const ResourceSpectrum& resource, const InputStateSpec& input,
                               const QuadSpec& quad) {
    Domain domain;
    const DistributionGrid grid = grid_for(resource, input, quad, domain);
    const double p_floor = 1e-12 * grid.p_max;
    double best = -1.0;
    for (std::size_t k = 0; k < grid.F.size(); ++k) {
        if (grid.P[k] >= p_floor && grid.P[k] >= kProbabilityFloor) {
            best = std::max(best, grid.F[k]);
        }
    }
    if (best < 0.0) {
        throw CertificateError("max_fidelity: no outcome with non-negligible probability");
    }
    MaxFidelityResult r;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid.n_im(); ++j) {
        for (int i = 0; i < grid.n_re(); ++i) {
            const std::size_t k = grid.index(i, j);
            if (grid.P[k] < p_floor || grid.P[k] < kProbabilityFloor || grid.F[k] < best - 1e-12) {
                continue;
            }
            ++r.plateau_points;
            const double dist = std::abs(grid.beta(i, j) - domain.center);
            if (dist < best_dist) {
                best_dist = dist;
                r.beta = grid.beta(i, j);
                r.fidelity = grid.F[k];
                r.probability = grid.P[k];
            }
        }
    }
    // Compass search; accepts strict improvements only so plateaus stay put.
    const PointEvaluator eval(resource, input, quad.grid);
    auto value_at = [&](Complex b) {
        const PointValue v = eval(b);
        return std::pair{v.fidelity ? std::min(1.0, *v.fidelity) : -1.0, v.probability};
    };
    double step = 0.5 * domain.step;
    const std::array<Complex, 4> dirs = {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}};
    while (step > 1e-7) {
        bool moved = false;
        for (const auto& dir : dirs) {
            const Complex cand = r.beta + step * dir;
            const auto [f, p] = value_at(cand);
            if (f > r.fidelity + 1e-14) {
                r.beta = cand;
                r.fidelity = f;
                r.probability = p;
                moved = true;
                break;
            }
        }
        if (!moved) {
            step *= 0.5;
        }
    }
    return r;
}

SweepResult sweep_threshold_probability(const InputStateSpec& input, double threshold,
                                        std::vector<int> n_list, const QuadSpec& quad) {
    if (n_list.empty()) {
        throw DomainError("sweep needs at least one truncation number");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw DomainError("sweep threshold must lie in (0, 1)");
    }
    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
    SweepResult out;
    out.input_family = family_name(input);
    out.threshold = threshold;
    out.step = quad.step;
    for (const int n : n_list) {
        SweepRow row;
        row.n = n;
        try {
            const ResourceSpectrum res = ResourceSpectrum::mend(n);
            const AcceptanceResult a = acceptance_probability(res, input, threshold, quad);
            row.acceptance_prob = a.value;
            row.err_estimate = a.error_estimate;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        out.rows.push_back(std::move(row));
    }
    const SweepRow* prev = nullptr;
    for (const auto& row : out.rows) {
        if (row.error) {
            continue;
        }
        if (prev != nullptr &&
            row.acceptance_prob < prev->acceptance_prob - (row.err_estimate + prev->err_estimate)) {
            out.trend_violations.emplace_back(prev->n, row.n);
        }
        prev = &row;
    }
    return out;
}

} // namespace cvqt

#include "cvqt/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cvqt/errors.hpp"
#include "cvqt/parallel.hpp"
#include "cvqt/special_functions.hpp"

namespace cvqt {
namespace {

constexpr double kPi = std::numbers::pi;

// Relative size of leakage plus resource-tail bound below which a pipeline
// point is trusted for comparisons.
constexpr double kCertifiedRelativeError = 1e-9;

bool certified(const PointValue& v) {
    return std::abs(v.leakage) + v.truncation_bound <= kCertifiedRelativeError * v.probability &&
           v.fidelity_bound <= kCertifiedRelativeError;
}

// |F' - F| for F' = |o + do|^2 / (P + dP) with |do| <= db, 0 <= dP <= pb.
double fidelity_bound(Complex overlap, double prob, double db, double pb) {
    if (db == 0.0 && pb == 0.0) {
        return 0.0;
    }
    const double o = std::abs(overlap);
    return std::min(1.0, (2.0 * o * db + db * db + std::norm(overlap) * pb / prob) / prob);
}

double poisson_log_term(double u, int n) { return -u + n * std::log(u) - log_factorial(n); }

} // namespace

PointValue evaluate_point(const ResourceSpectrum& resource, const FockVector& psi, Complex beta) {
    const TransferMoments t = transfer_moments(resource, psi, beta);
    PointValue v;
    v.beta = beta;
    v.probability = t.prob_density;
    v.truncation_bound = t.truncation_bound;
    if (t.prob_density >= kProbabilityFloor) {
        v.fidelity = std::norm(t.overlap) / t.prob_density;
        v.fidelity_bound = fidelity_bound(t.overlap, t.prob_density, t.overlap_bound, t.truncation_bound);
    }
    return v;
}

PointValue evaluate_point_full(const ResourceSpectrum& resource, const FockVector& psi, Complex beta) {
    const TransferResult t = apply_transfer(resource, psi, beta);
    PointValue v;
    v.beta = beta;
    v.probability = t.prob_density;
    v.leakage = t.leakage;
    v.truncation_bound = t.truncation_bound;
    if (t.prob_density >= kProbabilityFloor) {
        v.fidelity = std::norm(t.overlap) / t.prob_density;
        v.fidelity_bound = fidelity_bound(t.overlap, t.prob_density, t.overlap_bound, t.truncation_bound);
    }
    return v;
}

double probability(const ResourceSpectrum& resource, const FockVector& psi, Complex beta) {
    return transfer_moments(resource, psi, beta).prob_density;
}

std::optional<double> fidelity(const ResourceSpectrum& resource, const FockVector& psi,
                               Complex beta) {
    return evaluate_point(resource, psi, beta).fidelity;
}

double fidelity_coherent_tmsv(Complex alpha, double lambda, Complex beta) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw DomainError("fidelity_coherent_tmsv: lambda must lie in [0, 1)");
    }
    const double g = 1.0 - lambda;
    return std::exp(-g * g * std::norm(alpha - beta));
}

double probability_coherent_tmsv(Complex alpha, double lambda, Complex beta) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw DomainError("probability_coherent_tmsv: lambda must lie in [0, 1)");
    }
    const double s = 1.0 - lambda * lambda;
    return s / kPi * std::exp(-s * std::norm(alpha - beta));
}

double fidelity_coherent_mend(Complex alpha, int n, Complex beta) {
    if (n < 1) {
        throw DomainError("fidelity_coherent_mend: N must be positive");
    }
    const double u = std::norm(alpha - beta);
    if (u == 0.0) {
        return 1.0;
    }
    if (u < n) {
        // Upper tail sum_{k>=N} e^{-u} u^k / k!, terms decrease from k = N.
        double term = std::exp(poisson_log_term(u, n));
        double tail = 0.0;
        for (int k = n; term > 1e-18 * tail && k < n + 100000; ++k) {
            tail += term;
            term *= u / (k + 1.0);
        }
        return 1.0 - tail;
    }
    // Lower sum, descending from k = N-1 where the terms are largest.
    double term = std::exp(poisson_log_term(u, n - 1));
    double sum = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        sum += term;
        term *= k / u;
    }
    return std::min(1.0, sum);
}

double probability_coherent_mend(Complex alpha, int n, Complex beta) {
    return fidelity_coherent_mend(alpha, n, beta) / (kPi * n);
}

Complex g_function(Complex beta, const FockVector& psi, std::span<const Complex> f) {
    const double r = std::abs(beta);
    if (r == 0.0) {
        throw DomainError("g_function: undefined at beta = 0");
    }
    const double x = r * r;
    const double log_r = std::log(r);
    const double theta = std::arg(beta);
    // The (m, l) double sum factorizes as |S_n|^2 with
    // S_n = sum_m c_m sqrt(n!/m!) L_n^{m-n}(x) conj(beta)^m / |beta|^n.
    Complex g{};
    for (std::size_t n = 0; n < f.size(); ++n) {
        const int ni = static_cast<int>(n);
        Complex s{};
        for (int m = 0; m <= psi.cutoff(); ++m) {
            if (psi[m] == Complex{}) {
                continue;
            }
            const double lag = laguerre(ni, m - ni, x);
            if (lag == 0.0) {
                continue;
            }
            const double mag =
                std::exp(-0.5 * x + 0.5 * log_factorial_ratio(ni, m) + (m - ni) * log_r);
            s += psi[m] * std::polar(1.0, -m * theta) * (mag * lag);
        }
        g += f[n] * std::norm(s);
    }
    return g;
}

double probability_from_g(const ResourceSpectrum& resource, const FockVector& psi, Complex beta) {
    const auto d = resource.coefficients();
    std::vector<Complex> d2(d.size());
    std::transform(d.begin(), d.end(), d2.begin(), [](Complex v) { return Complex{std::norm(v), 0.0}; });
    return g_function(beta, psi, d2).real() / kPi;
}

double fidelity_from_g(const ResourceSpectrum& resource, const FockVector& psi, Complex beta) {
    const auto d = resource.coefficients();
    std::vector<Complex> d2(d.size());
    std::transform(d.begin(), d.end(), d2.begin(), [](Complex v) { return Complex{std::norm(v), 0.0}; });
    const double denom = g_function(beta, psi, d2).real();
    if (!(denom * (1.0 / kPi) >= kProbabilityFloor)) {
        throw DomainError("fidelity_from_g: zero-probability outcome");
    }
    return std::norm(g_function(beta, psi, d)) / denom;
}

int AxisSpec::count() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("grid step must be positive");
    }
    if (!(max >= min)) {
        throw DomainError("grid axis max must not be below min");
    }
    const double n = std::floor((max - min) / step + 1e-9);
    if (n > 1e7) {
        throw DomainError("grid axis has too many points");
    }
    return static_cast<int>(n) + 1;
}

GridSpec GridSpec::centered(Complex center, double half_width, double step) {
    if (!(half_width >= 0.0)) {
        throw DomainError("grid half-width must be non-negative");
    }
    if (!(step > 0.0)) {
        throw DomainError("grid step must be positive");
    }
    return GridSpec{{center.real() - half_width, center.real() + half_width, step},
                    {center.imag() - half_width, center.imag() + half_width, step}};
}

std::optional<PointValue> closed_form_point(const ResourceSpectrum& resource,
                                            const InputStateSpec& input, Complex beta) {
    const auto* coh = std::get_if<CoherentInput>(&input);
    if (coh == nullptr) {
        return std::nullopt;
    }
    PointValue v;
    v.beta = beta;
    if (const auto* t = std::get_if<TwoModeSqueezed>(&resource.kind())) {
        v.probability = probability_coherent_tmsv(coh->alpha, t->lambda, beta);
        v.fidelity = fidelity_coherent_tmsv(coh->alpha, t->lambda, beta);
        return v;
    }
    if (const auto* m = std::get_if<Mend>(&resource.kind())) {
        const double f = fidelity_coherent_mend(coh->alpha, m->n, beta);
        v.probability = f / (kPi * m->n);
        v.fidelity = f;
        return v;
    }
    return std::nullopt;
}

DistributionGrid compute_grid(const ResourceSpectrum& resource, const InputStateSpec& input,
                              const GridSpec& grid, const GridOptions& options) {
    const FockVector psi = realize(input, options.truncation);
    DistributionGrid out;
    out.spec = grid;
    out.resource_label = resource.label();
    out.input_family = family_name(input);
    out.input_cutoff = psi.cutoff();
    out.input_truncation_tail = psi.truncation_tail();
    out.resource_cutoff = resource.cutoff();
    out.resource_tail_mass = resource.tail_mass();

    const int nre = grid.re.count();
    const int nim = grid.im.count();
    const std::size_t total = std::size_t(nre) * nim;
    const bool fast = options.closed_form_fast_path &&
                      closed_form_point(resource, input, Complex{}).has_value();
    const std::size_t stride = std::max(1, options.cross_check_stride);
    out.closed_form_used = fast;

    std::vector<PointValue> values(total);
    std::vector<double> deviation(total, -1.0);
    std::vector<double> leakage(total, -1.0);
    parallel_for(
        total,
        [&](std::size_t i) {
            const Complex beta{grid.re.at(int(i % nre)), grid.im.at(int(i / nre))};
            const bool sample = i % stride == 0;
            if (!fast) {
                values[i] = evaluate_point(resource, psi, beta);
            } else {
                values[i] = *closed_form_point(resource, input, beta);
                if (sample) {
                    const PointValue pipe = evaluate_point(resource, psi, beta);
                    if (certified(pipe) && pipe.fidelity) {
                        deviation[i] = std::max(std::abs(*pipe.fidelity - *values[i].fidelity),
                                                kPi * std::abs(pipe.probability - values[i].probability));
                    }
                }
            }
            if (sample) {
                // The state-producing pipeline measures what the working cutoff loses.
                leakage[i] = std::abs(evaluate_point_full(resource, psi, beta).leakage);
            }
        },
        options.threads);

    out.P.resize(total);
    out.F.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        const PointValue& v = values[i];
        out.P[i] = std::max(0.0, v.probability);
        if (leakage[i] >= 0.0) {
            ++out.leakage_checks;
            out.max_leakage = std::max(out.max_leakage, leakage[i]);
        }
        out.max_truncation_bound = std::max(out.max_truncation_bound, v.truncation_bound);
        out.max_fidelity_bound = std::max(out.max_fidelity_bound, v.fidelity_bound);
        if (!v.fidelity) {
            out.F[i] = 0.0;
            ++out.undefined_points;
        } else {
            const double f = *v.fidelity;
            if (f > 1.0 || f < 0.0) {
                ++out.clipped_points;
                out.max_fidelity_excursion = std::max(out.max_fidelity_excursion, f - 1.0);
            }
            out.F[i] = std::clamp(f, 0.0, 1.0);
        }
        if (deviation[i] >= 0.0) {
            ++out.closed_form_checks;
            out.closed_form_max_deviation = std::max(out.closed_form_max_deviation, deviation[i]);
        }
        out.p_max = std::max(out.p_max, out.P[i]);
        const int ir = int(i % nre);
        const int ii = int(i / nre);
        if (ir == 0 || ir == nre - 1 || ii == 0 || ii == nim - 1) {
            out.boundary_p_max = std::max(out.boundary_p_max, out.P[i]);
        }
    }

    if (out.boundary_ratio() > 1e-8) {
        std::ostringstream os;
        os << "coverage: boundary P reaches " << out.boundary_ratio() << " of P_max";
        out.warnings.push_back(os.str());
    }
    if (out.max_leakage > 1e-10) {
        std::ostringstream os;
        os << "leakage: working cutoff lost up to " << out.max_leakage << " of density";
        out.warnings.push_back(os.str());
    }
    if (out.max_fidelity_excursion > 1e-8) {
        std::ostringstream os;
        os << "fidelity exceeded 1 by " << out.max_fidelity_excursion << " before clipping";
        out.warnings.push_back(os.str());
    }
    // Truncating the input moves amplitudes by up to sqrt(tail).
    const double allowed = options.cross_check_tolerance + 8.0 * std::sqrt(out.input_truncation_tail);
    if (fast && out.closed_form_max_deviation > allowed) {
        std::ostringstream os;
        os << "closed form deviates from pipeline by " << out.closed_form_max_deviation << " (allowed "
           << allowed << ")";
        throw CertificateError(os.str());
    }
    return out;
}

} // namespace cvqt

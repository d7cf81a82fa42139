#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvqt/channels.hpp"
#include "cvqt/fock.hpp"

namespace cvqt {

/// Below this outcome density the fidelity is reported as undefined.
inline constexpr double kProbabilityFloor = 1e-300;

struct PointValue {
    Complex beta;
    double probability = 0.0;
    std::optional<double> fidelity; // unclipped; empty for zero-probability outcomes
    double leakage = 0.0;
    double truncation_bound = 0.0;
    double fidelity_bound = 0.0; // upper bound on |dF| from the resource tail
};

/// P, F and the resource-tail bound from transfer_moments; leakage is zero.
PointValue evaluate_point(const ResourceSpectrum& resource, const FockVector& psi, Complex beta);
/// Same point through apply_transfer, with measured working-cutoff leakage.
PointValue evaluate_point_full(const ResourceSpectrum& resource, const FockVector& psi, Complex beta);

/// P(beta) = ||T psi||^2.
double probability(const ResourceSpectrum& resource, const FockVector& psi, Complex beta);

/// F(beta) = |<psi|T psi>|^2 / P(beta); nullopt when P(beta) < kProbabilityFloor.
std::optional<double> fidelity(const ResourceSpectrum& resource, const FockVector& psi,
                               Complex beta);

// Closed forms for coherent inputs.
double fidelity_coherent_tmsv(Complex alpha, double lambda, Complex beta);
double probability_coherent_tmsv(Complex alpha, double lambda, Complex beta);

/// Poisson CDF P(X <= N-1) at mean |alpha - beta|^2. Near the flat top it is
/// evaluated as one minus the upper tail so values close to 1 keep full precision.
double fidelity_coherent_mend(Complex alpha, int n, Complex beta);
double probability_coherent_mend(Complex alpha, int n, Complex beta);

/// G(beta, {f_n}) = sum_n f_n |<n|D(-beta)|psi>|^2 written as the Laguerre
/// double sum
///   e^{-|beta|^2} sum_{m,l} sum_n c_l^* c_m f_n n!/sqrt(m! l!)
///       L_n^{m-n}(|beta|^2) L_n^{l-n}(|beta|^2) conj(beta)^m beta^l / |beta|^{2n}.
/// Then P = G({|d_n|^2}) / pi and F = |G({d_n})|^2 / G({|d_n|^2}).
/// Throws DomainError at beta = 0.
Complex g_function(Complex beta, const FockVector& psi, std::span<const Complex> f);

double probability_from_g(const ResourceSpectrum& resource, const FockVector& psi, Complex beta);
double fidelity_from_g(const ResourceSpectrum& resource, const FockVector& psi, Complex beta);

/// Uniform axis min, min + step, ..., up to max.
struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    double step = 0.05;

    int count() const;
    double at(int i) const { return min + i * step; }
};

struct GridSpec {
    AxisSpec re;
    AxisSpec im;

    static GridSpec centered(Complex center, double half_width, double step);
    std::size_t size() const { return std::size_t(re.count()) * im.count(); }
};

struct GridOptions {
    /// Use closed forms for coherent inputs through TMSV/MEND resources,
    /// cross-checked against the pipeline every cross_check_stride points.
    /// The same points are also run through the state-producing pipeline to
    /// measure working-cutoff leakage.
    bool closed_form_fast_path = true;
    int cross_check_stride = 97;
    /// Maximum allowed |F_pipeline - F_closed| (and |P| difference scaled by pi)
    /// at cross-check points whose truncation certificate holds, before adding
    /// 8 sqrt(input truncation tail).
    double cross_check_tolerance = 1e-6;
    int threads = 0;
    TruncationPolicy truncation;
};

/// Fidelity and probability on a rectangular grid of outcomes.
/// Values are stored row-major with im as the outer index.
struct DistributionGrid {
    GridSpec spec;
    std::vector<double> P;
    std::vector<double> F;

    std::string resource_label;
    std::string input_family;
    int input_cutoff = 0;
    double input_truncation_tail = 0.0;
    int resource_cutoff = 0;
    double resource_tail_mass = 0.0;

    double max_leakage = 0.0; // over the leakage_checks sampled points
    std::size_t leakage_checks = 0;
    double max_truncation_bound = 0.0;
    double max_fidelity_bound = 0.0;
    double max_fidelity_excursion = 0.0; // largest F - 1 before clipping
    std::size_t clipped_points = 0;
    std::size_t undefined_points = 0;

    double p_max = 0.0;
    double boundary_p_max = 0.0;
    bool closed_form_used = false;
    std::size_t closed_form_checks = 0;
    double closed_form_max_deviation = 0.0;
    std::vector<std::string> warnings;

    int n_re() const { return spec.re.count(); }
    int n_im() const { return spec.im.count(); }
    std::size_t index(int i_re, int i_im) const { return std::size_t(i_im) * n_re() + i_re; }
    Complex beta(int i_re, int i_im) const { return {spec.re.at(i_re), spec.im.at(i_im)}; }
    /// boundary_p_max / p_max.
    double boundary_ratio() const { return p_max > 0.0 ? boundary_p_max / p_max : 0.0; }
};

DistributionGrid compute_grid(const ResourceSpectrum& resource, const InputStateSpec& input,
                              const GridSpec& grid, const GridOptions& options = {});

/// Closed-form P and F for coherent inputs when the resource admits one.
std::optional<PointValue> closed_form_point(const ResourceSpectrum& resource,
                                            const InputStateSpec& input, Complex beta);

} // namespace cvqt

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvqt/channels.hpp"
#include "cvqt/distributions.hpp"
#include "cvqt/fock.hpp"

namespace cvqt {

/// Boundary P above this fraction of P_max makes a quadrature an error.
inline constexpr double kCoverageErrorRatio = 1e-4;

struct QuadSpec {
    double step = 0.05;
    std::optional<double> half_width; // auto-sized when empty
    std::optional<Complex> center;    // distribution_center(input) when empty
    int bisection_levels = 4;
    GridOptions grid;
};

/// Square integration domain center +- half_width. intervals_per_side counts
/// steps from the center to an edge and is even, so the full grid and its
/// every-other-point subgrid both admit composite Simpson.
struct Domain {
    Complex center;
    double half_width = 0.0;
    double step = 0.0;
    int intervals_per_side = 0;

    GridSpec grid() const;
};

/// Centered on the input's distribution center with half-width
///   MEND(N):  max(6, |alpha| + 3 + sqrt(N))
///   TMSV(l):  max(6, |alpha| + sqrt(ln(1e8) / (1 - l^2)))
///   custom:   max(6, |alpha| + 3 + sqrt(K + 1))
/// rounded up to a multiple of 2 * step.
Domain choose_domain(const ResourceSpectrum& resource, const InputStateSpec& input,
                     const QuadSpec& quad);

/// Composite 2D Simpson of row-major samples (im outer) using every
/// `stride`-th point. Both interval counts must be divisible by 2 * stride.
double simpson_2d(const std::vector<double>& values, int n_re, int n_im, double step, int stride = 1);

struct AverageResult {
    double value = 0.0;
    double error_estimate = 0.0;   // Richardson |S_h - S_2h| / 15
    double coarse_value = 0.0;     // S_2h
    double total_probability = 0.0;
    double total_probability_error = 0.0;
    Domain domain;
    double boundary_ratio = 0.0;
    std::vector<std::string> warnings;
};

/// F_av = integral of P(beta) F(beta) over the outcome plane.
AverageResult average_fidelity(const ResourceSpectrum& resource, const InputStateSpec& input,
                               const QuadSpec& quad = {});
/// Same, from an already computed grid whose axes have equal step.
AverageResult average_fidelity(const DistributionGrid& grid);

/// integral of P^2; with a MEND resource pi N times this equals F_av.
double integrate_probability_squared(const DistributionGrid& grid);

struct AcceptanceResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double coarse_value = 0.0;     // same integral with one fewer bisection level
    std::size_t refined_cells = 0; // top-level cells straddling the contour
    std::size_t extra_points = 0;  // pipeline evaluations spent on refinement
    Domain domain;
    double boundary_ratio = 0.0;
    std::vector<std::string> warnings;
};

/// Predicate over a point deciding membership in the accepted region.
using RegionPredicate = std::function<bool(const PointValue&)>;

/// P-mass of the region selected by `accept`, with cells straddling the region
/// edge bisected up to quad.bisection_levels times.
AcceptanceResult region_probability(const ResourceSpectrum& resource, const InputStateSpec& input,
                                    const RegionPredicate& accept, const QuadSpec& quad = {});

/// integral of P(beta) [F(beta) > threshold], threshold in [0, 1).
AcceptanceResult acceptance_probability(const ResourceSpectrum& resource,
                                        const InputStateSpec& input, double threshold,
                                        const QuadSpec& quad = {});

struct MaxFidelityResult {
    Complex beta;
    double fidelity = 0.0;
    double probability = 0.0;
    std::size_t plateau_points = 0; // grid points tied with the maximum
};

/// Grid argmax refined by compass search. Ties (flat tops) resolve to the
/// point closest to the domain center.
MaxFidelityResult max_fidelity(const ResourceSpectrum& resource, const InputStateSpec& input,
                               const QuadSpec& quad = {});

struct SweepRow {
    int n = 0;
    double acceptance_prob = 0.0;
    double err_estimate = 0.0;
    std::optional<std::string> error;
};

struct SweepResult {
    std::string input_family;
    double threshold = 0.0;
    double step = 0.0;
    std::vector<SweepRow> rows; // N ascending
    /// Consecutive pairs (N_i, N_{i+1}) whose decrease exceeds the combined error bars.
    std::vector<std::pair<int, int>> trend_violations;
    bool monotone() const { return trend_violations.empty(); }
};

/// Acceptance probability per MEND truncation number. Failures are recorded per row.
SweepResult sweep_threshold_probability(const InputStateSpec& input, double threshold,
                                        std::vector<int> n_list, const QuadSpec& quad = {});

} // namespace cvqt

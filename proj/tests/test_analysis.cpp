#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvqt/analysis.hpp"
#include "cvqt/errors.hpp"

using namespace cvqt;

namespace {

constexpr double kPi = std::numbers::pi;

QuadSpec coarse(double step = 0.1) {
    QuadSpec q;
    q.step = step;
    return q;
}

const QubitInput kPlus{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};

} // namespace

TEST(Simpson, GaussianAndPolynomial) {
    const int n = 121;
    const double h = 0.1;
    std::vector<double> gauss(n * n), cubic(n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = -6.0 + i * h;
            const double y = -6.0 + j * h;
            gauss[j * n + i] = std::exp(-x * x - y * y);
            cubic[j * n + i] = x * x * x + x * x * y + 1.0;
        }
    }
    EXPECT_NEAR(simpson_2d(gauss, n, n, h), kPi, 1e-12);
    EXPECT_NEAR(simpson_2d(gauss, n, n, h, 2), kPi, 1e-8);
    // Cubic in x, quadratic in y: exact up to rounding.
    EXPECT_NEAR(simpson_2d(cubic, n, n, h), 144.0 + 0.0 + 12.0 * 12.0 * 0.0, 1e-9 * 144.0 + 1e-9);
    EXPECT_THROW(simpson_2d(gauss, n, n, h, 7), DomainError);
    EXPECT_THROW(simpson_2d(gauss, n - 1, n, h), DomainError);
}

TEST(Domain, SizingRules) {
    QuadSpec q;
    const Domain mend = choose_domain(ResourceSpectrum::mend(21), CoherentInput{{0.0, 1.5}}, q);
    EXPECT_NEAR(mend.center.imag(), 1.5, 1e-15);
    EXPECT_GE(mend.half_width, 1.5 + 3.0 + std::sqrt(21.0));
    EXPECT_EQ(mend.intervals_per_side % 2, 0);
    EXPECT_NEAR(mend.intervals_per_side * mend.step, mend.half_width, 1e-12);
    const Domain small = choose_domain(ResourceSpectrum::mend(2), kPlus, q);
    EXPECT_GE(small.half_width, 6.0);
    q.half_width = 2.0;
    q.center = Complex{1.0, -1.0};
    const Domain fixed = choose_domain(ResourceSpectrum::mend(2), kPlus, q);
    EXPECT_NEAR(fixed.half_width, 2.0, 1e-12);
    EXPECT_EQ(fixed.center, Complex(1.0, -1.0));
}

TEST(Average, CoherentSqueezedIsHalfOnePlusLambda) {
    for (const double lambda : {0.0, 0.4, 0.8}) {
        const AverageResult r =
            average_fidelity(ResourceSpectrum::two_mode_squeezed(lambda), CoherentInput{{0.5, -1.0}}, coarse());
        EXPECT_NEAR(r.value, 0.5 * (1.0 + lambda), 1e-3) << lambda;
        EXPECT_NEAR(r.total_probability, 1.0, 1e-3);
        EXPECT_LT(r.error_estimate, 1e-4);
        EXPECT_TRUE(r.warnings.empty());
    }
}

TEST(Average, TotalProbabilityIsOne) {
    for (const ResourceSpectrum& r : {ResourceSpectrum::mend(6), ResourceSpectrum::two_mode_squeezed(0.85)}) {
        for (const InputStateSpec& in : {InputStateSpec{kPlus}, InputStateSpec{CatInput{{0.0, 1.5}}}}) {
            const AverageResult a = average_fidelity(r, in, coarse(0.1));
            EXPECT_NEAR(a.total_probability, 1.0, 1e-3) << r.label() << " " << family_name(in);
        }
    }
}

TEST(Average, MendEqualsScaledProbabilitySquared) {
    const int n = 6;
    const ResourceSpectrum r = ResourceSpectrum::mend(n);
    const Domain dom = choose_domain(r, kPlus, coarse(0.1));
    const DistributionGrid g = compute_grid(r, kPlus, dom.grid());
    EXPECT_NEAR(average_fidelity(g).value, kPi * n * integrate_probability_squared(g), 1e-6);
}

TEST(Average, CoverageErrorOnTinyDomain) {
    QuadSpec q = coarse(0.1);
    q.half_width = 1.0;
    EXPECT_THROW(average_fidelity(ResourceSpectrum::two_mode_squeezed(0.8), kPlus, q), CertificateError);
}

TEST(Acceptance, VacuumThroughSingleLevelResource) {
    // N = 1 with the vacuum: F = e^{-u}, P = F / pi, so the accepted mass is 1 - threshold.
    for (const double thr : {0.5, 0.9, 0.99}) {
        const AcceptanceResult a =
            acceptance_probability(ResourceSpectrum::mend(1), QubitInput{1.0, 0.0}, thr, coarse());
        EXPECT_NEAR(a.value, 1.0 - thr, a.error_estimate) << thr;
        EXPECT_LT(a.error_estimate, 2e-3);
        EXPECT_GT(a.refined_cells, 0u);
    }
}

TEST(Acceptance, ZeroThresholdIsTotalProbability) {
    const AcceptanceResult a =
        acceptance_probability(ResourceSpectrum::mend(21), kPlus, 0.0, coarse());
    EXPECT_NEAR(a.value, 1.0, 1e-3);
    EXPECT_THROW(acceptance_probability(ResourceSpectrum::mend(21), kPlus, 1.0, coarse()), DomainError);
}

TEST(Acceptance, MonotoneInThreshold) {
    const ResourceSpectrum r = ResourceSpectrum::mend(11);
    double prev = 2.0;
    for (const double thr : {0.0, 0.5, 0.8, 0.95, 0.99}) {
        const double v = acceptance_probability(r, CatInput{{0.0, 1.5}}, thr, coarse()).value;
        EXPECT_LE(v, prev + 1e-9) << thr;
        prev = v;
    }
}

TEST(Acceptance, MendProbabilityThresholdRegion) {
    const int n = 21;
    const double thr = 0.99;
    const ResourceSpectrum r = ResourceSpectrum::mend(n);
    const AcceptanceResult by_f = acceptance_probability(r, kPlus, thr, coarse());
    const AcceptanceResult by_p = region_probability(
        r, kPlus, [&](const PointValue& v) { return v.probability > thr / (kPi * n); }, coarse());
    EXPECT_NEAR(by_f.value, by_p.value, 1e-6);
}

TEST(MaxFidelity, CoherentPeakAtAlpha) {
    const Complex alpha{0.0, 1.5};
    const MaxFidelityResult m =
        max_fidelity(ResourceSpectrum::two_mode_squeezed(0.8), CoherentInput{alpha}, coarse());
    EXPECT_NEAR(m.fidelity, 1.0, 1e-9);
    EXPECT_LT(std::abs(m.beta - alpha), 1e-3);
}

TEST(MaxFidelity, MendPlateauResolvesToCenter) {
    const MaxFidelityResult m = max_fidelity(ResourceSpectrum::mend(21), kPlus, coarse());
    EXPECT_NEAR(m.fidelity, 1.0, 1e-10);
    EXPECT_GT(m.plateau_points, 1u);
    EXPECT_LT(std::abs(m.beta), 1e-12);
}

TEST(Sweep, RowsSortedAndErrorsRecorded) {
    const SweepResult s = sweep_threshold_probability(QubitInput{1.0, 0.0}, 0.9, {3, 1, 0, 2, 3}, coarse());
    ASSERT_EQ(s.rows.size(), 4u);
    EXPECT_EQ(s.rows[0].n, 0);
    EXPECT_TRUE(s.rows[0].error.has_value());
    EXPECT_EQ(s.rows[1].n, 1);
    EXPECT_FALSE(s.rows[1].error.has_value());
    EXPECT_NEAR(s.rows[1].acceptance_prob, 0.1, s.rows[1].err_estimate);
    EXPECT_LE(s.rows[1].acceptance_prob, s.rows[2].acceptance_prob);
    EXPECT_LE(s.rows[2].acceptance_prob, s.rows[3].acceptance_prob);
    EXPECT_TRUE(s.monotone());
    EXPECT_EQ(s.input_family, "qubit");
    EXPECT_THROW(sweep_threshold_probability(kPlus, 0.9, {}, coarse()), DomainError);
    EXPECT_THROW(sweep_threshold_probability(kPlus, 0.0, {2}, coarse()), DomainError);
}

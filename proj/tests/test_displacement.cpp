#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cvqt/displacement.hpp"
#include "cvqt/errors.hpp"
#include "oracles.hpp"

using namespace cvqt;

namespace {

std::vector<Complex> outcome_grid(double radius, int rings, int spokes) {
    std::vector<Complex> out{Complex{}};
    for (int r = 1; r <= rings; ++r) {
        for (int s = 0; s < spokes; ++s) {
            out.push_back(std::polar(radius * r / rings, 2.0 * std::numbers::pi * (s + 0.37) / spokes));
        }
    }
    return out;
}

double interior_deviation(const ComplexMatrix& a, const ComplexMatrix& b, int interior) {
    double worst = 0.0;
    for (int k = 0; k <= interior; ++k) {
        for (int n = 0; n <= interior; ++n) {
            worst = std::max(worst, std::abs(a(k, n) - b(k, n)));
        }
    }
    return worst;
}

} // namespace

TEST(DisplacementElement, VacuumOverlap) {
    for (const Complex beta : outcome_grid(4.0, 4, 7)) {
        EXPECT_NEAR(std::abs(displacement_element(0, 0, beta) - std::exp(-0.5 * std::norm(beta))), 0.0,
                    1e-15);
    }
}

TEST(DisplacementElement, IdentityAtZero) {
    for (int k = 0; k < 10; ++k) {
        for (int n = 0; n < 10; ++n) {
            EXPECT_EQ(displacement_element(k, n, {}), Complex(k == n ? 1.0 : 0.0, 0.0));
        }
    }
}

TEST(DisplacementElement, AgreesWithOracleAtHalf) {
    const ComplexMatrix oracle = oracle_displacement_matrix({0.5, 0.0}, 64);
    EXPECT_NEAR(std::abs(displacement_element(2, 1, {0.5, 0.0}) - oracle(2, 1)), 0.0, 1e-10);
}

TEST(DisplacementElement, FirstColumnIsCoherentState) {
    for (const Complex beta : outcome_grid(5.0, 3, 5)) {
        for (int k = 0; k < 60; ++k) {
            EXPECT_NEAR(std::abs(displacement_element(k, 0, beta) - oracle::coherent_amplitude(beta, k)), 0.0,
                        1e-13);
        }
    }
}

TEST(DisplacementElement, NegativeIndicesThrow) {
    EXPECT_THROW(displacement_element(-1, 0, {1.0, 0.0}), DomainError);
    EXPECT_THROW(displacement_element(0, -2, {1.0, 0.0}), DomainError);
}

TEST(DisplacementBlock, MatchesElementwise) {
    for (const Complex beta : {Complex{0.3, -0.2}, Complex{2.0, 1.0}, Complex{-4.0, 3.0}}) {
        const ComplexMatrix block = displacement_block(beta, 70, 25);
        for (int k = 0; k <= 70; ++k) {
            for (int n = 0; n <= 25; ++n) {
                const Complex e = displacement_element(k, n, beta);
                EXPECT_NEAR(std::abs(block(k, n) - e), 0.0, 1e-13 * std::max(1.0, std::abs(e)))
                    << k << "," << n << " beta=" << beta;
            }
        }
    }
}

TEST(DisplacementBlock, ConjugationSymmetry) {
    for (const Complex beta : outcome_grid(4.0, 4, 6)) {
        const ComplexMatrix plus = displacement_block(beta, 40, 40);
        const ComplexMatrix minus = displacement_block(-beta, 40, 40);
        for (int k = 0; k <= 40; ++k) {
            for (int n = 0; n <= 40; ++n) {
                EXPECT_NEAR(std::abs(plus(k, n) - std::conj(minus(n, k))), 0.0, 1e-14);
            }
        }
    }
}

TEST(DisplacementBlock, InverseOnInteriorBlock) {
    const int cutoff = 64;
    const int big = 260;
    for (const Complex beta : outcome_grid(4.0, 2, 5)) {
        // D(beta) D(-beta) with the intermediate sum taken far past the interior.
        const ComplexMatrix a = displacement_block(beta, cutoff / 2, big);
        const ComplexMatrix b = displacement_block(-beta, big, cutoff / 2);
        double worst = 0.0;
        for (int k = 0; k <= cutoff / 2; ++k) {
            for (int n = 0; n <= cutoff / 2; ++n) {
                Complex s{};
                for (int j = 0; j <= big; ++j) {
                    s += a(k, j) * b(j, n);
                }
                worst = std::max(worst, std::abs(s - (k == n ? 1.0 : 0.0)));
            }
        }
        EXPECT_LE(worst, 1e-8) << "beta=" << beta;
    }
}

TEST(Oracle, IdentityAtZero) {
    const ComplexMatrix m = oracle_displacement_matrix({}, 16);
    for (int k = 0; k <= 16; ++k) {
        for (int n = 0; n <= 16; ++n) {
            EXPECT_EQ(m(k, n), Complex(k == n ? 1.0 : 0.0, 0.0));
        }
    }
    EXPECT_THROW(oracle_displacement_matrix({1.0, 0.0}, 257), DomainError);
}

TEST(Oracle, ColumnZeroIsCoherentState) {
    for (const Complex beta : {Complex{1.0, 0.5}, Complex{-2.0, 2.0}, Complex{0.0, 3.0}}) {
        const ComplexMatrix m = oracle_displacement_matrix(beta, 64);
        for (int k = 0; k <= 32; ++k) {
            EXPECT_NEAR(std::abs(m(k, 0) - oracle::coherent_amplitude(beta, k)), 0.0, 1e-8);
        }
    }
}

TEST(Oracle, InteriorUnitarityAndConvergence) {
    for (const Complex beta : outcome_grid(3.0, 3, 4)) {
        const ComplexMatrix u = oracle_displacement_matrix(beta, 64);
        const ComplexMatrix u2 = oracle_displacement_matrix(beta, 128);
        double defect = 0.0;
        for (int k = 0; k <= 32; ++k) {
            for (int n = 0; n <= 32; ++n) {
                Complex s{};
                for (int j = 0; j <= 64; ++j) {
                    s += std::conj(u(j, k)) * u(j, n);
                }
                defect = std::max(defect, std::abs(s - (k == n ? 1.0 : 0.0)));
            }
        }
        EXPECT_LE(defect, 1e-8);
        // Doubling the cutoff leaves the interior block unchanged for |beta| <= 3.
        EXPECT_LE(interior_deviation(u, u2, 32), 1e-8) << beta;
    }
}

TEST(Oracle, LaguerreFormOnInteriorBlock) {
    // Cutoff 128 keeps the truncated exponential converged on indices <= 64 up to |beta| = 4.
    for (const Complex beta : outcome_grid(4.0, 4, 5)) {
        const ComplexMatrix oracle = oracle_displacement_matrix(beta, 128);
        const ComplexMatrix block = displacement_block(beta, 64, 64);
        EXPECT_LE(interior_deviation(block, oracle, 64), 1e-8) << "beta=" << beta;
    }
}

TEST(DisplaceState, ZeroIsIdentity) {
    const FockVector psi = make_qubit({0.6, 0.0}, {0.0, 0.8});
    const DisplacedState d = displace_state(psi, {});
    for (int k = 0; k <= d.state.cutoff(); ++k) {
        EXPECT_EQ(d.state[k], k <= 1 ? psi[k] : Complex{});
    }
    EXPECT_EQ(d.leakage, 0.0);
}

TEST(DisplaceState, VacuumBecomesCoherent) {
    for (const Complex alpha : {Complex{0.0, 1.5}, Complex{2.5, -1.0}, Complex{-0.3, 0.1}}) {
        const DisplacedState d = displace_state(FockVector::basis(0), alpha);
        for (int k = 0; k <= d.state.cutoff(); ++k) {
            EXPECT_NEAR(std::abs(d.state[k] - oracle::coherent_amplitude(alpha, k)), 0.0, 1e-12) << k;
        }
    }
}

TEST(DisplaceState, NormPreservedWithEnvelope) {
    for (const Complex beta : outcome_grid(6.0, 3, 5)) {
        for (const FockVector& psi : {make_qubit(1.0, 1.0), make_cat({0.0, 1.5}), make_coherent({1.0, 1.0})}) {
            const DisplacedState d = displace_state(psi, beta);
            EXPECT_LE(std::abs(d.state.norm_squared() - 1.0), 1e-8);
            EXPECT_LE(std::abs(d.leakage), 1e-10);
            EXPECT_EQ(d.state.cutoff(), displaced_cutoff(psi.cutoff(), beta));
        }
    }
}

TEST(DisplaceState, HighLevelsStayInsideCutoff) {
    for (const int n : {20, 61, 150}) {
        for (const double r : {1.0, 3.0, 6.0, 8.0}) {
            const Complex beta = std::polar(r, 0.7);
            const DisplacedState d = displace_state(FockVector::basis(n), beta);
            EXPECT_LE(std::abs(d.leakage), 1e-12) << n << " " << r;
            EXPECT_GE(d.state.cutoff(), n + displacement_envelope(beta));
        }
    }
}

TEST(DisplaceState, CutoffErrors) {
    const FockVector psi = make_qubit(1.0, 1.0);
    EXPECT_THROW(displace_state(psi, {1.0, 0.0}, 0), DomainError);
    EXPECT_THROW(displace_state(psi, {1.0, 0.0}, kWorkingCutoffLimit + 1), CutoffOverflow);
    EXPECT_THROW(displace_state(psi, {40.0, 0.0}), CutoffOverflow);
}

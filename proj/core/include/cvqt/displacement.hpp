#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cvqt/fock.hpp"

namespace cvqt {

/// Largest Fock index any working space (displaced states, transfer
/// pipeline) may use.
inline constexpr int kWorkingCutoffLimit = 1024;

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    Complex& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
    const Complex& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

    static ComplexMatrix identity(int n);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

/// <k|D(beta)|n> through the Laguerre form. For k < n the conjugate-symmetric
/// expression with L_k^{n-k} is used so the superscript never goes negative.
Complex displacement_element(int k, int n, Complex beta);

/// Block of <k|D(beta)|n> for 0 <= k <= max_row, 0 <= n <= max_col.
///
/// Each diagonal k - n = const is one Laguerre recurrence in the lower index,
/// so the whole block costs O(rows * cols).
ComplexMatrix displacement_block(Complex beta, int max_row, int max_col);

/// ceil(|beta|^2 + 6|beta| + 20): extra Fock levels a displacement may populate.
int displacement_envelope(Complex beta);

/// Output cutoff for displacing a state supported on |0>..|source_cutoff>:
/// max(source_cutoff + displacement_envelope(beta), ceil((sqrt(source_cutoff) + |beta| + 4)^2)).
/// The second term covers the spread of D(beta)|n> for large n.
int displaced_cutoff(int source_cutoff, Complex beta);

struct DisplacedState {
    FockVector state;   // unnormalized in general
    double leakage = 0; // ||psi||^2 - ||D psi||^2 lost past the output cutoff
};

/// D(beta) psi on indices 0..out_cutoff. Defaults to cutoff(psi) + envelope.
DisplacedState displace_state(const FockVector& psi, Complex beta,
                              std::optional<int> out_cutoff = std::nullopt);

/// Independent reference: exp(beta a^dagger - conj(beta) a) on the truncated
/// space of dimension cutoff + 1, by scaling and squaring around a Taylor
/// core. Edge rows/columns carry truncation artefacts; only the interior block
/// approximates the true operator.
ComplexMatrix oracle_displacement_matrix(Complex beta, int cutoff);

} // namespace cvqt

#include "cvqt/displacement.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "cvqt/errors.hpp"
#include "cvqt/special_functions.hpp"

namespace cvqt {
namespace {

constexpr int kOracleMaxCutoff = 256;

// Fills one diagonal of the block: entries (lower + alpha, lower) when
// upper_is_row, else (lower, lower + alpha). The lower index runs 0..count-1.
// value = e^{-x/2} sqrt(lower!/(lower+alpha)!) L_lower^alpha(x) * phase * r^alpha
void fill_diagonal(ComplexMatrix& m, int alpha, int count, double x, double log_r, Complex phase,
                   bool upper_is_row, std::vector<double>& lag) {
    lag.resize(count);
    laguerre_sequence(alpha, x, lag);
    const double log_start = -0.5 * x + alpha * log_r - 0.5 * log_factorial(alpha);
    double pref = std::exp(log_start);
    for (int low = 0; low < count; ++low) {
        if (low > 0) {
            pref *= std::sqrt(static_cast<double>(low) / static_cast<double>(low + alpha));
        }
        const Complex v = phase * (pref * lag[low]);
        if (upper_is_row) {
            m(low + alpha, low) = v;
        } else {
            m(low, low + alpha) = v;
        }
    }
}

} // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Complex displacement_element(int k, int n, Complex beta) {
    if (k < 0 || n < 0) {
        throw DomainError("displacement_element: negative Fock index");
    }
    const double r = std::abs(beta);
    if (r == 0.0) {
        return k == n ? Complex{1.0, 0.0} : Complex{};
    }
    const double x = r * r;
    if (k >= n) {
        const int a = k - n;
        const double mag = std::exp(-0.5 * x + 0.5 * log_factorial_ratio(n, k) + a * std::log(r));
        return std::polar(1.0, a * std::arg(beta)) * (mag * laguerre(n, a, x));
    }
    const int a = n - k;
    const double mag = std::exp(-0.5 * x + 0.5 * log_factorial_ratio(k, n) + a * std::log(r));
    return std::polar(1.0, a * std::arg(-std::conj(beta))) * (mag * laguerre(k, a, x));
}

ComplexMatrix displacement_block(Complex beta, int max_row, int max_col) {
    if (max_row < 0 || max_col < 0) {
        throw DomainError("displacement_block: negative extent");
    }
    ComplexMatrix m(max_row + 1, max_col + 1);
    const double r = std::abs(beta);
    if (r == 0.0) {
        for (int i = 0; i <= std::min(max_row, max_col); ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }
    const double x = r * r;
    const double log_r = std::log(r);
    const double theta = std::arg(beta);
    const double theta_conj = std::arg(-std::conj(beta));
    std::vector<double> lag;
    // k >= n: degree n, superscript k - n, phase beta^{k-n}.
    for (int a = 0; a <= max_row; ++a) {
        const int count = std::min(max_col, max_row - a) + 1;
        fill_diagonal(m, a, count, x, log_r, std::polar(1.0, a * theta), true, lag);
    }
    // k < n: degree k, superscript n - k, phase (-conj beta)^{n-k}.
    for (int a = 1; a <= max_col; ++a) {
        const int count = std::min(max_row, max_col - a) + 1;
        if (count <= 0) {
            break;
        }
        fill_diagonal(m, a, count, x, log_r, std::polar(1.0, a * theta_conj), false, lag);
    }
    return m;
}

int displacement_envelope(Complex beta) {
    const double r = std::abs(beta);
    return static_cast<int>(std::ceil(r * r + 6.0 * r + 20.0));
}

int displaced_cutoff(int source_cutoff, Complex beta) {
    const double reach = std::sqrt(static_cast<double>(source_cutoff)) + std::abs(beta) + 4.0;
    const long long spread = static_cast<long long>(std::ceil(reach * reach));
    const long long shifted = static_cast<long long>(source_cutoff) + displacement_envelope(beta);
    return static_cast<int>(std::min<long long>(std::max(spread, shifted), 1 << 30));
}

DisplacedState displace_state(const FockVector& psi, Complex beta, std::optional<int> out_cutoff) {
    const int in_k = psi.cutoff();
    const long long requested =
        out_cutoff ? static_cast<long long>(*out_cutoff)
                   : static_cast<long long>(displaced_cutoff(in_k, beta));
    if (requested < in_k) {
        throw DomainError("displace_state: output cutoff below input cutoff");
    }
    if (requested > kWorkingCutoffLimit) {
        throw CutoffOverflow(static_cast<int>(std::min<long long>(requested, 1 << 30)),
                             kWorkingCutoffLimit);
    }
    const int out_k = static_cast<int>(requested);
    if (beta == Complex{}) {
        return {psi.padded(out_k), 0.0};
    }
    const ComplexMatrix d = displacement_block(beta, out_k, in_k);
    std::vector<Complex> out(out_k + 1, Complex{});
    for (int k = 0; k <= out_k; ++k) {
        Complex s{};
        for (int n = 0; n <= in_k; ++n) {
            s += d(k, n) * psi[n];
        }
        out[k] = s;
    }
    FockVector state(std::move(out));
    const double leakage = psi.norm_squared() - state.norm_squared();
    return {std::move(state), leakage};
}

ComplexMatrix oracle_displacement_matrix(Complex beta, int cutoff) {
    if (cutoff < 0 || cutoff > kOracleMaxCutoff) {
        throw DomainError("oracle_displacement_matrix: cutoff must lie in [0, 256]");
    }
    const int dim = cutoff + 1;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double s = std::sqrt(static_cast<double>(n));
        gen(n, n - 1) += beta * s;            // beta a^dagger
        gen(n - 1, n) -= std::conj(beta) * s; // -conj(beta) a
    }
    // Scale until the 1-norm is at most 1/2, Taylor-expand, then square back.
    const double norm1 = gen.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    }
    const Eigen::MatrixXcd scaled = gen / std::ldexp(1.0, squarings);
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
    for (int j = 1; j <= 40; ++j) {
        term = term * scaled / static_cast<double>(j);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-20) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    ComplexMatrix out(dim, dim);
    for (int k = 0; k < dim; ++k) {
        for (int n = 0; n < dim; ++n) {
            out(k, n) = result(k, n);
        }
    }
    return out;
}

} // namespace cvqt

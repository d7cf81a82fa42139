#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cvqt {

using Complex = std::complex<double>;

inline constexpr double kDefaultEpsilon = 1e-12;
inline constexpr int kDefaultHardCap = 512;

/// Pure state over the Fock basis |0>..|K>.
///
/// Values are immutable once built. Vectors flagged normalized satisfy
/// | sum |c_m|^2 - 1 | <= 1e-10; unnormalized vectors appear as outputs of the
/// transfer operator, where the squared norm carries the outcome density.
class FockVector {
public:
    FockVector() : amps_{Complex{1.0, 0.0}}, normalized_(true) {}

    /// Takes amplitudes as given. Setting normalized checks the norm.
    explicit FockVector(std::vector<Complex> amps, bool normalized = false,
                        double truncation_tail = 0.0);

    static FockVector basis(int n);

    int cutoff() const noexcept { return static_cast<int>(amps_.size()) - 1; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const Complex> amps() const noexcept { return amps_; }
    Complex operator[](std::size_t m) const { return amps_[m]; }
    bool normalized() const noexcept { return normalized_; }

    /// Probability mass dropped by truncation before renormalization.
    double truncation_tail() const noexcept { return truncation_tail_; }

    double norm_squared() const noexcept;

    /// Scaled to unit norm. Throws DomainError on a zero vector.
    FockVector normalized_copy() const;

    /// Zero-padded (or identical) copy with the given cutoff.
    FockVector padded(int new_cutoff) const;

private:
    std::vector<Complex> amps_;
    bool normalized_ = false;
    double truncation_tail_ = 0.0;
};

/// sum_m conj(u_m) v_m, shorter vector zero-padded.
Complex inner_product(const FockVector& u, const FockVector& v);

struct TruncationPolicy {
    double epsilon = kDefaultEpsilon;
    int hard_cap = kDefaultHardCap;
};

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!), cut at the smallest K whose tail mass is
/// below epsilon and renormalized.
FockVector make_coherent(Complex alpha, const TruncationPolicy& policy = {});

/// N_alpha (|alpha> + |-alpha>), N_alpha = (2 + 2 e^{-2|alpha|^2})^{-1/2}.
FockVector make_cat(Complex alpha, const TruncationPolicy& policy = {});

/// (a|0> + b|1>) / sqrt(|a|^2 + |b|^2).
FockVector make_qubit(Complex a, Complex b);

/// Arbitrary finite-basis amplitudes, renormalized.
FockVector make_custom(std::vector<Complex> amps);

struct CoherentInput {
    Complex alpha;
};
struct CatInput {
    Complex alpha;
};
struct QubitInput {
    Complex a;
    Complex b;
};
struct CustomInput {
    std::vector<Complex> amps;
};

using InputStateSpec = std::variant<CoherentInput, CatInput, QubitInput, CustomInput>;

FockVector realize(const InputStateSpec& spec, const TruncationPolicy& policy = {});

/// "coherent", "cat", "qubit" or "custom".
std::string family_name(const InputStateSpec& spec);

/// Center of the outcome distribution used for domain sizing: alpha for
/// coherent inputs, the origin otherwise (a cat's lobes sit at +-alpha).
Complex distribution_center(const InputStateSpec& spec);

/// Coherent amplitude magnitude |alpha| (0 for qubit and custom inputs).
double displacement_scale(const InputStateSpec& spec);

} // namespace cvqt

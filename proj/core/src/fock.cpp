#include "cvqt/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvqt/errors.hpp"
#include "cvqt/special_functions.hpp"

namespace cvqt {
namespace {

constexpr double kNormTolerance = 1e-10;

double squared_norm(std::span<const Complex> amps) {
    double s = 0.0;
    for (const auto& c : amps) {
        s += std::norm(c);
    }
    return s;
}

// Coherent-state amplitude in log-magnitude form; exact zero for n > 0 when alpha = 0.
Complex coherent_amplitude(Complex alpha, int n) {
    const double r = std::abs(alpha);
    if (r == 0.0) {
        return n == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    }
    const double log_mag = -0.5 * r * r + n * std::log(r) - 0.5 * log_factorial(n);
    return std::polar(std::exp(log_mag), n * std::arg(alpha));
}

// Picks the smallest cutoff K with sum_{n>K} mass_n < epsilon, given masses
// computed far enough past the bulk that the remainder is negligible.
int certified_cutoff(const std::vector<double>& mass, double epsilon, int hard_cap) {
    double tail = 0.0;
    std::vector<double> suffix(mass.size() + 1, 0.0);
    for (std::size_t i = mass.size(); i-- > 0;) {
        tail += mass[i];
        suffix[i] = tail;
    }
    for (std::size_t k = 0; k < mass.size(); ++k) {
        if (suffix[k + 1] < epsilon) {
            if (static_cast<int>(k) > hard_cap) {
                throw CutoffOverflow(static_cast<int>(k), hard_cap);
            }
            return static_cast<int>(k);
        }
    }
    throw CutoffOverflow(static_cast<int>(mass.size()), hard_cap);
}

void check_policy(const TruncationPolicy& policy) {
    if (!(policy.epsilon > 0.0 && policy.epsilon < 1.0)) {
        throw DomainError("truncation epsilon must lie in (0, 1)");
    }
    if (policy.hard_cap < 0) {
        throw DomainError("truncation hard cap must be non-negative");
    }
}

// Number of Fock levels to examine so that everything beyond is negligible.
// A mean photon number above the cap puts half the mass past it.
int scan_length(double mean, int hard_cap) {
    if (mean > hard_cap) {
        throw CutoffOverflow(static_cast<int>(std::min<double>(mean, 1e9)), hard_cap);
    }
    return static_cast<int>(mean + 12.0 * std::sqrt(mean + 1.0) + 60.0) + 1;
}

FockVector truncate_and_normalize(std::vector<Complex> amps, double epsilon, int hard_cap) {
    std::vector<double> mass(amps.size());
    std::transform(amps.begin(), amps.end(), mass.begin(),
                   [](const Complex& c) { return std::norm(c); });
    const int k = certified_cutoff(mass, epsilon, hard_cap);
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    const double kept = std::accumulate(mass.begin(), mass.begin() + k + 1, 0.0);
    amps.resize(k + 1);
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& c : amps) {
        c *= scale;
    }
    return FockVector(std::move(amps), true, std::max(0.0, total - kept) / total);
}

} // namespace

FockVector::FockVector(std::vector<Complex> amps, bool normalized, double truncation_tail)
    : amps_(std::move(amps)), normalized_(normalized), truncation_tail_(truncation_tail) {
    if (amps_.empty()) {
        throw DomainError("FockVector needs at least one amplitude");
    }
    for (const auto& c : amps_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw DomainError("FockVector amplitudes must be finite");
        }
    }
    if (normalized_ && std::abs(squared_norm(amps_) - 1.0) > kNormTolerance) {
        throw DomainError("FockVector flagged normalized but norm deviates from 1");
    }
}

FockVector FockVector::basis(int n) {
    if (n < 0) {
        throw DomainError("basis index must be non-negative");
    }
    std::vector<Complex> amps(n + 1, Complex{});
    amps[n] = 1.0;
    return FockVector(std::move(amps), true);
}

double FockVector::norm_squared() const noexcept { return squared_norm(amps_); }

FockVector FockVector::normalized_copy() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) {
        throw DomainError("cannot normalize a zero vector");
    }
    std::vector<Complex> out(amps_);
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& c : out) {
        c *= scale;
    }
    return FockVector(std::move(out), true, truncation_tail_);
}

FockVector FockVector::padded(int new_cutoff) const {
    if (new_cutoff < cutoff()) {
        throw DomainError("padded: new cutoff is smaller than current cutoff");
    }
    std::vector<Complex> out(amps_);
    out.resize(new_cutoff + 1, Complex{});
    return FockVector(std::move(out), normalized_, truncation_tail_);
}

Complex inner_product(const FockVector& u, const FockVector& v) {
    const std::size_t n = std::min(u.size(), v.size());
    Complex s{};
    for (std::size_t m = 0; m < n; ++m) {
        s += std::conj(u[m]) * v[m];
    }
    return s;
}

FockVector make_coherent(Complex alpha, const TruncationPolicy& policy) {
    check_policy(policy);
    const double mean = std::norm(alpha);
    const int len = scan_length(mean, policy.hard_cap);
    std::vector<Complex> amps(len);
    for (int n = 0; n < len; ++n) {
        amps[n] = coherent_amplitude(alpha, n);
    }
    return truncate_and_normalize(std::move(amps), policy.epsilon, policy.hard_cap);
}

FockVector make_cat(Complex alpha, const TruncationPolicy& policy) {
    check_policy(policy);
    const double mean = std::norm(alpha);
    const double norm_const = 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * mean));
    const int len = scan_length(mean, policy.hard_cap);
    std::vector<Complex> amps(len, Complex{});
    for (int n = 0; n < len; n += 2) {
        amps[n] = 2.0 * norm_const * coherent_amplitude(alpha, n);
    }
    return truncate_and_normalize(std::move(amps), policy.epsilon, policy.hard_cap);
}

FockVector make_qubit(Complex a, Complex b) {
    const double n2 = std::norm(a) + std::norm(b);
    if (!(n2 > 0.0)) {
        throw DomainError("qubit amplitudes are both zero");
    }
    const double scale = 1.0 / std::sqrt(n2);
    return FockVector({a * scale, b * scale}, true);
}

FockVector make_custom(std::vector<Complex> amps) {
    return FockVector(std::move(amps)).normalized_copy();
}

FockVector realize(const InputStateSpec& spec, const TruncationPolicy& policy) {
    // clang-format off
    struct Visitor {
        const TruncationPolicy& policy;
        FockVector operator()(const CoherentInput& s) const { return make_coherent(s.alpha, policy); }
        FockVector operator()(const CatInput& s) const { return make_cat(s.alpha, policy); }
        FockVector operator()(const QubitInput& s) const { return make_qubit(s.a, s.b); }
        FockVector operator()(const CustomInput& s) const { return make_custom(s.amps); }
    };
    // clang-format on
    return std::visit(Visitor{policy}, spec);
}

std::string family_name(const InputStateSpec& spec) {
    constexpr const char* names[] = {"coherent", "cat", "qubit", "custom"};
    return names[spec.index()];
}

Complex distribution_center(const InputStateSpec& spec) {
    if (const auto* c = std::get_if<CoherentInput>(&spec)) {
        return c->alpha;
    }
    return {};
}

double displacement_scale(const InputStateSpec& spec) {
    if (const auto* c = std::get_if<CoherentInput>(&spec)) {
        return std::abs(c->alpha);
    }
    if (const auto* c = std::get_if<CatInput>(&spec)) {
        return std::abs(c->alpha);
    }
    return 0.0;
}

} // namespace cvqt

#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cvqt/fock.hpp"

namespace cvqt {

/// Two-mode squeezed vacuum, d_n = sqrt(1 - lambda^2) lambda^n.
struct TwoModeSqueezed {
    double lambda = 0.0;
};

/// Maximally entangled state on the lowest N Fock levels, d_n = 1/sqrt(N).
struct Mend {
    int n = 1;
};

/// Arbitrary number-diagonal resource; sum |d_n|^2 must be 1.
struct CustomSpectrum {
    std::vector<Complex> d;
};

using ResourceKind = std::variant<TwoModeSqueezed, Mend, CustomSpectrum>;

/// Schmidt coefficients {d_n} with certified tail sum_{n>K} |d_n|^2 < epsilon.
/// MEND and custom spectra are returned exactly.
std::vector<Complex> schmidt_coefficients(const ResourceKind& kind,
                                          double epsilon = kDefaultEpsilon,
                                          int hard_cap = kDefaultHardCap);

/// Realized entanglement resource. Immutable after construction.
class ResourceSpectrum {
public:
    explicit ResourceSpectrum(ResourceKind kind, double epsilon = kDefaultEpsilon,
                              int hard_cap = kDefaultHardCap);

    static ResourceSpectrum two_mode_squeezed(double lambda, double epsilon = kDefaultEpsilon) {
        return ResourceSpectrum(TwoModeSqueezed{lambda}, epsilon);
    }
    static ResourceSpectrum mend(int n) { return ResourceSpectrum(Mend{n}); }
    static ResourceSpectrum custom(std::vector<Complex> d) {
        return ResourceSpectrum(CustomSpectrum{std::move(d)});
    }

    const ResourceKind& kind() const noexcept { return kind_; }
    std::span<const Complex> coefficients() const noexcept { return d_; }
    int cutoff() const noexcept { return static_cast<int>(d_.size()) - 1; }
    double epsilon() const noexcept { return epsilon_; }

    /// sum_{n > cutoff} |d_n|^2 of the untruncated spectrum.
    double tail_mass() const noexcept { return tail_mass_; }
    /// sup_{n > cutoff} |d_n|^2 of the untruncated spectrum.
    double tail_sup() const noexcept { return tail_sup_; }

    bool is_mend() const noexcept { return std::holds_alternative<Mend>(kind_); }
    /// N of a MEND resource; throws DomainError otherwise.
    int mend_n() const;
    bool is_real() const noexcept;

    /// "mend:21", "tmsv:0.8" or "custom:<K+1>".
    std::string label() const;

private:
    ResourceKind kind_;
    double epsilon_;
    std::vector<Complex> d_;
    double tail_mass_ = 0.0;
    double tail_sup_ = 0.0;
};

struct TransferResult {
    FockVector out;            // T psi, unnormalized
    double prob_density = 0.0; // ||T psi||^2
    Complex beta;
    Complex overlap;              // <psi|T psi>
    double leakage = 0.0;         // density lost past the working cutoff
    double truncation_bound = 0.0; // upper bound on density lost to the resource tail
    double overlap_bound = 0.0;    // upper bound on |<psi|T psi>| lost to the resource tail
    int working_cutoff = 0;
};

/// T psi for T = (1/sqrt(pi)) sum_n d_n D(beta)|n><n|D(-beta), unit gain.
///
/// Pipeline: phi = D(-beta) psi, project and weight by d_n, displace back by
/// +beta and scale by 1/sqrt(pi). The output lives in the space of cutoff
/// displaced_cutoff(max(cutoff(psi), K), beta), where K drops trailing resource
/// levels whose weighted mass is below 1e-26 of the total.
/// psi must be normalized.
TransferResult apply_transfer(const ResourceSpectrum& resource, const FockVector& psi,
                              Complex beta);

struct TransferMoments {
    double prob_density = 0.0; // ||T psi||^2
    Complex overlap;           // <psi|T psi>
    double truncation_bound = 0.0;
    double overlap_bound = 0.0;
};

/// prob_density and overlap of apply_transfer without forming T psi. The final
/// displacement is unitary, so ||D(beta) w||^2 = ||w||^2 and
/// <psi|D(beta) w> = <D(-beta) psi|w> for the weighted projection w; no
/// working-cutoff leakage occurs.
TransferMoments transfer_moments(const ResourceSpectrum& resource, const FockVector& psi,
                                 Complex beta);

/// || T^dagger T psi - T psi / sqrt(pi N) || for a MEND resource.
double mend_idempotency_defect(const ResourceSpectrum& resource, const FockVector& psi,
                               Complex beta);

} // namespace cvqt

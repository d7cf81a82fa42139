#include "cvqt/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cvqt/displacement.hpp"
#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

constexpr double kSpectrumNormTolerance = 1e-10;

struct TransferCore {
    std::vector<Complex> out;
    Complex overlap;
    double prob = 0.0;
    double exact_prob = 0.0;
    double captured_phi = 0.0;
    int working_cutoff = 0;
};

// Weighted components whose tail mass stays below this fraction of the total
// are not displaced back; their norm is still counted in exact_prob.
constexpr double kNegligibleTail = 1e-26;

struct Projection {
    std::vector<Complex> phi;      // <n|D(-beta)|psi>
    std::vector<Complex> weighted; // d_n phi_n / sqrt(pi)
    double captured_phi = 0.0;
    double exact_prob = 0.0;
};

// Stages (i) and (ii): phi_n = sum_m conj(<m|D(beta)|n>) c_m, weighted by d_n.
Projection project(const ResourceSpectrum& resource, std::span<const Complex> psi, Complex beta) {
    const int in_k = static_cast<int>(psi.size()) - 1;
    const int res_k = resource.cutoff();
    const auto d = resource.coefficients();
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    const ComplexMatrix in_block = displacement_block(beta, in_k, res_k);
    Projection p;
    p.phi.resize(res_k + 1);
    p.weighted.resize(res_k + 1);
    for (int n = 0; n <= res_k; ++n) {
        Complex phi{};
        for (int m = 0; m <= in_k; ++m) {
            phi += std::conj(in_block(m, n)) * psi[m];
        }
        p.phi[n] = phi;
        p.captured_phi += std::norm(phi);
        p.weighted[n] = d[n] * phi * inv_sqrt_pi;
        p.exact_prob += std::norm(p.weighted[n]);
    }
    return p;
}

// Shared pipeline; psi need not be normalized.
TransferCore transfer(const ResourceSpectrum& resource, std::span<const Complex> psi,
                      Complex beta) {
    const int in_k = static_cast<int>(psi.size()) - 1;
    const int res_k = resource.cutoff();
    Projection proj = project(resource, psi, beta);
    const std::vector<Complex>& weighted = proj.weighted;
    TransferCore core;
    core.captured_phi = proj.captured_phi;
    core.exact_prob = proj.exact_prob;
    int eff_k = res_k;
    double tail = 0.0;
    while (eff_k > 0 && tail + std::norm(weighted[eff_k]) <= kNegligibleTail * core.exact_prob) {
        tail += std::norm(weighted[eff_k]);
        --eff_k;
    }

    const long long big = displaced_cutoff(std::max(in_k, eff_k), beta);
    if (big > kWorkingCutoffLimit) {
        throw CutoffOverflow(static_cast<int>(big), kWorkingCutoffLimit);
    }
    const int work_k = static_cast<int>(big);
    core.working_cutoff = work_k;
    const ComplexMatrix block = displacement_block(beta, work_k, eff_k);
    core.out.assign(work_k + 1, Complex{});
    for (int k = 0; k <= work_k; ++k) {
        Complex s{};
        for (int n = 0; n <= eff_k; ++n) {
            s += block(k, n) * weighted[n];
        }
        core.out[k] = s;
        core.prob += std::norm(s);
    }
    for (int m = 0; m <= in_k; ++m) {
        core.overlap += std::conj(psi[m]) * core.out[m];
    }
    return core;
}

} // namespace

std::vector<Complex> schmidt_coefficients(const ResourceKind& kind, double epsilon, int hard_cap) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("schmidt_coefficients: epsilon must lie in (0, 1)");
    }
    if (const auto* t = std::get_if<TwoModeSqueezed>(&kind)) {
        const double lam = t->lambda;
        if (!(lam >= 0.0 && lam < 1.0)) {
            throw DomainError("two-mode squeezing parameter must lie in [0, 1)");
        }
        // Tail beyond K is exactly lambda^{2(K+1)}.
        const double lam2 = lam * lam;
        int k = 0;
        double tail = lam2;
        while (tail >= epsilon) {
            ++k;
            tail *= lam2;
            if (k > hard_cap) {
                throw CutoffOverflow(k, hard_cap);
            }
        }
        std::vector<Complex> d(k + 1);
        const double a = std::sqrt(1.0 - lam2);
        double p = 1.0;
        for (int n = 0; n <= k; ++n) {
            d[n] = a * p;
            p *= lam;
        }
        return d;
    }
    if (const auto* m = std::get_if<Mend>(&kind)) {
        if (m->n < 1) {
            throw DomainError("MEND truncation number must be positive");
        }
        if (m->n - 1 > hard_cap) {
            throw CutoffOverflow(m->n - 1, hard_cap);
        }
        return std::vector<Complex>(m->n, Complex{1.0 / std::sqrt(static_cast<double>(m->n)), 0.0});
    }
    const auto& c = std::get<CustomSpectrum>(kind);
    if (c.d.empty()) {
        throw DomainError("custom spectrum is empty");
    }
    if (static_cast<int>(c.d.size()) - 1 > hard_cap) {
        throw CutoffOverflow(static_cast<int>(c.d.size()) - 1, hard_cap);
    }
    double s = 0.0;
    for (const auto& v : c.d) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("custom spectrum has non-finite entries");
        }
        s += std::norm(v);
    }
    if (std::abs(s - 1.0) > kSpectrumNormTolerance) {
        throw DomainError("custom spectrum must satisfy sum |d_n|^2 = 1");
    }
    return c.d;
}

ResourceSpectrum::ResourceSpectrum(ResourceKind kind, double epsilon, int hard_cap)
    : kind_(std::move(kind)), epsilon_(epsilon), d_(schmidt_coefficients(kind_, epsilon, hard_cap)) {
    if (const auto* t = std::get_if<TwoModeSqueezed>(&kind_)) {
        const double lam2 = t->lambda * t->lambda;
        tail_mass_ = std::pow(lam2, cutoff() + 1);
        tail_sup_ = (1.0 - lam2) * tail_mass_;
    }
}

int ResourceSpectrum::mend_n() const {
    if (const auto* m = std::get_if<Mend>(&kind_)) {
        return m->n;
    }
    throw DomainError("resource is not a MEND state");
}

bool ResourceSpectrum::is_real() const noexcept {
    for (const auto& v : d_) {
        if (v.imag() != 0.0) {
            return false;
        }
    }
    return true;
}

std::string ResourceSpectrum::label() const {
    std::ostringstream os;
    if (const auto* t = std::get_if<TwoModeSqueezed>(&kind_)) {
        os << "tmsv:" << t->lambda;
    } else if (const auto* m = std::get_if<Mend>(&kind_)) {
        os << "mend:" << m->n;
    } else {
        os << "custom:" << d_.size();
    }
    return os.str();
}

TransferResult apply_transfer(const ResourceSpectrum& resource, const FockVector& psi,
                              Complex beta) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
        throw DomainError("apply_transfer: measurement outcome must be finite");
    }
    if (!psi.normalized()) {
        throw DomainError("apply_transfer: input state must be normalized");
    }
    TransferCore core = transfer(resource, psi.amps(), beta);
    TransferResult r{FockVector(std::move(core.out)), core.prob, beta, core.overlap};
    r.leakage = core.exact_prob - core.prob;
    const double lost_phi = std::max(0.0, psi.norm_squared() - core.captured_phi);
    r.truncation_bound = resource.tail_sup() * lost_phi / std::numbers::pi;
    r.overlap_bound = std::sqrt(resource.tail_sup() / std::numbers::pi) * lost_phi;
    r.working_cutoff = core.working_cutoff;
    return r;
}

TransferMoments transfer_moments(const ResourceSpectrum& resource, const FockVector& psi,
                                 Complex beta) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
        throw DomainError("transfer_moments: measurement outcome must be finite");
    }
    if (!psi.normalized()) {
        throw DomainError("transfer_moments: input state must be normalized");
    }
    const Projection p = project(resource, psi.amps(), beta);
    TransferMoments m;
    m.prob_density = p.exact_prob;
    for (std::size_t n = 0; n < p.phi.size(); ++n) {
        m.overlap += std::conj(p.phi[n]) * p.weighted[n];
    }
    const double lost_phi = std::max(0.0, psi.norm_squared() - p.captured_phi);
    m.truncation_bound = resource.tail_sup() * lost_phi / std::numbers::pi;
    m.overlap_bound = std::sqrt(resource.tail_sup() / std::numbers::pi) * lost_phi;
    return m;
}

double mend_idempotency_defect(const ResourceSpectrum& resource, const FockVector& psi,
                               Complex beta) {
    const int n = resource.mend_n();
    const TransferCore once = transfer(resource, psi.amps(), beta);
    // Real coefficients make T self-adjoint, so T^dagger T psi = T (T psi).
    const TransferCore twice = transfer(resource, once.out, beta);
    const double scale = 1.0 / std::sqrt(std::numbers::pi * n);
    double s = 0.0;
    for (std::size_t k = 0; k < twice.out.size(); ++k) {
        const Complex first = k < once.out.size() ? once.out[k] : Complex{};
        s += std::norm(twice.out[k] - scale * first);
    }
    return std::sqrt(s);
}

} // namespace cvqt

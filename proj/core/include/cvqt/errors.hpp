#pragma once

#include <stdexcept>
#include <string>

namespace cvqt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A Fock cutoff would exceed its configured hard limit.
class CutoffOverflow : public std::runtime_error {
public:
    CutoffOverflow(int requested, int limit)
        : std::runtime_error("cutoff " + std::to_string(requested) + " exceeds limit " +
                             std::to_string(limit)),
          requested_(requested), limit_(limit) {}

    int requested() const noexcept { return requested_; }
    int limit() const noexcept { return limit_; }

private:
    int requested_;
    int limit_;
};

/// A numerical certificate (coverage, leakage, truncation) was violated.
class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cvqt

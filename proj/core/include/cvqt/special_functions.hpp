#pragma once

#include <span>
#include <vector>

namespace cvqt {

/// Generalized Laguerre polynomial L_n^alpha(x) for integer alpha.
///
/// Uses the upward three-term recurrence in the degree. Negative alpha is
/// accepted as long as n + alpha >= 0; such calls are reduced to a non-negative
/// superscript through L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^k(x).
/// Throws DomainError for n < 0, x < 0 or n + alpha < 0.
double laguerre(int n, int alpha, double x);

/// Writes L_0^alpha(x) .. L_{out.size()-1}^alpha(x) into out, alpha >= 0.
void laguerre_sequence(int alpha, double x, std::span<double> out);

/// ln(n!).
double log_factorial(int n);

/// ln(a!) - ln(b!).
double log_factorial_ratio(int a, int b);

} // namespace cvqt

#pragma once

namespace mlmat {

// Largest argument for which Gamma is finite in binary64.
inline constexpr double kGammaOverflowArg = 171.624;

/// Euler's Gamma function on the real line.
///
/// Throws PoleOfGamma for x in {0, -1, -2, ...} and Overflow for
/// x > 171.624. Negative non-integer arguments go through the reflection
/// formula.
double gamma_fn(double x);

/// 1/Gamma(x), an entire function: zero at the poles of Gamma and
/// underflows gracefully instead of throwing for large x.
double rgamma(double x);

/// Falling factorial (x)_k = x (x-1) ... (x-k+1); (x)_0 = 1.
double falling_factorial(double x, int k);

/// Generalized binomial coefficient binom(a, j) = (a)_j / j!.
double binomial(double a, int j);

double factorial(int n);

}  // namespace mlmat

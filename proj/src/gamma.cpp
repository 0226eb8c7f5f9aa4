#include "mlmat/gamma.hpp"

#include "mlmat/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mlmat {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with exact argument reduction.
double sin_pi(double x) {
    const double n = std::round(x);
    const double r = x - n;  // exact, |r| <= 1/2
    const double s = std::sin(std::numbers::pi * r);
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) throw Error(ErrorCode::InvalidArgument, "gamma_fn: NaN argument");
    if (is_nonpositive_integer(x))
        throw Error(ErrorCode::PoleOfGamma, "gamma_fn: pole at x = " + std::to_string(x));
    if (x > kGammaOverflowArg)
        throw Error(ErrorCode::Overflow, "gamma_fn: argument " + std::to_string(x) + " > 171.624");
    if (x > 0.0) return std::tgamma(x);

    // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
    const double y = 1.0 - x;
    const double s = sin_pi(x);
    if (y > kGammaOverflowArg) {
        const double mag = std::exp(std::log(std::numbers::pi / std::abs(s)) - std::lgamma(y));
        return s > 0 ? mag : -mag;
    }
    return std::numbers::pi / (s * std::tgamma(y));
}

double rgamma(double x) {
    if (std::isnan(x)) return x;
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > kGammaOverflowArg) return std::exp(-std::lgamma(x));
    if (x < 0.0 && 1.0 - x > kGammaOverflowArg) {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi, huge but maybe finite.
        return sin_pi(x) * std::exp(std::lgamma(1.0 - x)) / std::numbers::pi;
    }
    return 1.0 / gamma_fn(x);
}

double falling_factorial(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (x - i);
    return r;
}

double binomial(double a, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= (a - i) / (i + 1);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace mlmat

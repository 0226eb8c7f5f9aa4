#include "mlmat/errors.hpp"
#include "mlmat/gamma.hpp"
#include "mlmat/ml_scalar.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace mlmat {

namespace {

bool series_worth_trying(cplx z, int k, const MLParams& p, double tau, const DispatchOptions& opts) {
    const double r = std::abs(z);
    if (r > series_admissible_radius(k, p, tau)) return false;
    return r <= 1.0 || std::abs(std::arg(z)) <= p.alpha * std::numbers::pi / 2.0 ||
           r <= opts.cancellation_radius;
}

std::optional<DerivEval> try_series(cplx z, int k, const MLParams& p, double tau,
                                    const DispatchOptions& opts) {
    if (!series_worth_trying(z, k, p, tau, opts)) return std::nullopt;
    try {
        return ml_series(z, k, p, tau).eval;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::AccuracyLost || e.code() == ErrorCode::ArgumentOutOfRange)
            return std::nullopt;
        throw;
    }
}

// Series where accepted, otherwise the contour integral for that order.
DerivEval series_or_contour(cplx z, int k, const MLParams& p, double tau,
                            const DispatchOptions& opts) {
    if (z == cplx{0.0, 0.0}) {
        DerivEval e;
        e.value = factorial(k) * rgamma(p.alpha * k + p.beta);
        e.k = k;
        e.method = Method::Exact0;
        return e;
    }
    if (rational_kernel(p)) return lt_derivative(z, k, p, tau);
    if (auto s = try_series(z, k, p, tau, opts)) return *s;
    return lt_derivative(z, k, p, tau);
}

DerivEval dispatch(cplx z, int k, const MLParams& p, double tau, const DispatchOptions& opts) {
    if (z == cplx{0.0, 0.0} || k == 0) return series_or_contour(z, k, p, tau, opts);
    if (rational_kernel(p)) return lt_derivative(z, k, p, tau);
    if (auto s = try_series(z, k, p, tau, opts)) return *s;

    if (k < opts.balancing_threshold) {
        return sf_prabhakar(z, k, p, [&](cplx zz, const MLParams& pp) {
            return series_or_contour(zz, 0, pp, tau, opts);
        });
    }
    return balanced_derivative(z, k, 1, p, [&](cplx zz, int order, const MLParams& pp) {
        return series_or_contour(zz, order, pp, tau, opts);
    });
}

}  // namespace

DerivEval ml_derivative(cplx z, int k, const MLParams& p, double tau, const DispatchOptions& opts) {
    validate(p);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "ml_derivative: negative order");
    if (!(tau > kMachineEps)) throw Error(ErrorCode::InvalidArgument, "ml_derivative: tau <= eps");

    // Real coefficients: evaluate in the upper half plane and reflect.
    if (z.imag() < 0.0) {
        DerivEval e = ml_derivative(std::conj(z), k, p, tau, opts);
        e.value = std::conj(e.value);
        return e;
    }
    DerivEval e = dispatch(z, k, p, tau, opts);
    if (z.imag() == 0.0) e.value = e.value.real();
    return e;
}

DerivEval ml_value(cplx z, const MLParams& p, double tau) { return ml_derivative(z, 0, p, tau); }

}  // namespace mlmat

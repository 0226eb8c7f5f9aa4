#include "mlmat/errors.hpp"
#include "mlmat/gamma.hpp"
#include "mlmat/ml_scalar.hpp"

#include <algorithm>
#include <cmath>

namespace mlmat {

SFCoeffs djrbashian_coeffs(int k, const MLParams& p) {
    validate(p);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "djrbashian_coeffs: negative order");
    std::vector<double> c{1.0};
    for (int kk = 1; kk <= k; ++kk) {
        const double shift = 1.0 - p.beta - p.alpha * (kk - 1);
        std::vector<double> next(kk + 1);
        next[0] = shift * c[0];
        for (int j = 1; j <= kk - 1; ++j) next[j] = c[j - 1] + (shift + j) * c[j];
        next[kk] = 1.0;
        c = std::move(next);
    }
    return {k, std::move(c)};
}

namespace {

// Weighted combination with an error estimate that carries the constituent
// estimates plus the round-off of the final sum.
struct Accumulator {
    cplx sum{0.0, 0.0};
    double err = 0.0;
    double magnitude = 0.0;
    int evals = 0;
    bool degraded = false;

    void add(double weight, const DerivEval& e) {
        const cplx term = weight * e.value;
        sum += term;
        err += std::abs(weight) * e.err_estimate;
        magnitude += std::abs(term);
        evals += e.terms_or_nodes;
        degraded = degraded || e.degraded;
    }

    DerivEval finish(cplx scale, int k, Method m) const {
        DerivEval out;
        out.value = scale * sum;
        out.k = k;
        out.method = m;
        out.err_estimate = std::abs(scale) * (err + kMachineEps * magnitude);
        out.terms_or_nodes = evals;
        out.degraded = degraded;
        return out;
    }
};

}  // namespace

DerivEval sf_djrbashian(cplx z, int k, const MLParams& p, const ScalarMLEvaluator& ml_eval) {
    validate(p);
    if (z == cplx{0.0, 0.0}) throw Error(ErrorCode::InvalidArgument, "sf_djrbashian: z = 0");
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "sf_djrbashian: negative order");
    const SFCoeffs c = djrbashian_coeffs(k, p);
    Accumulator acc;
    for (int j = 0; j <= k; ++j) {
        if (c.c[j] == 0.0) continue;
        acc.add(c.c[j], ml_eval(z, {p.alpha, p.beta - j}));
    }
    const cplx scale = 1.0 / std::pow(p.alpha * z, k);
    return acc.finish(scale, k, Method::DjrbashianSF);
}

DerivEval sf_prabhakar(cplx z, int k, const MLParams& p, const ScalarMLEvaluator& ml_eval) {
    validate(p);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "sf_prabhakar: negative order");
    const SFCoeffs c = djrbashian_coeffs(k, p);
    Accumulator acc;
    for (int j = 0; j <= k; ++j) {
        if (c.c[j] == 0.0) continue;
        acc.add(c.c[j], ml_eval(z, {p.alpha, p.alpha * k + p.beta - j}));
    }
    return acc.finish(std::pow(p.alpha, -k), k, Method::PrabhakarSF);
}

DerivEval balanced_derivative(cplx z, int k, int q, const MLParams& p,
                              const DerivativeEvaluator& deriv_eval) {
    validate(p);
    if (q < 0 || q > k) throw Error(ErrorCode::InvalidArgument, "balanced_derivative: need 0 <= q <= k");
    const int m = k - q;
    const SFCoeffs c = djrbashian_coeffs(m, p);
    Accumulator acc;
    for (int j = 0; j <= m; ++j) {
        if (c.c[j] == 0.0) continue;
        acc.add(c.c[j], deriv_eval(z, q, {p.alpha, p.alpha * m + p.beta - j}));
    }
    DerivEval out = acc.finish(std::pow(p.alpha, -m), k, Method::Balanced);
    return out;
}

}  // namespace mlmat

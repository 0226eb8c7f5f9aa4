#include "mlmat/errors.hpp"
#include "mlmat/gamma.hpp"
#include "mlmat/ml_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mlmat {

void validate(const MLParams& p) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !(p.alpha > 0.0)) {
        std::ostringstream os;
        os << "ML parameters require alpha > 0 (alpha=" << p.alpha << ", beta=" << p.beta << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::Series: return "Series";
    case Method::LaplaceInversion: return "LaplaceInversion";
    case Method::PrabhakarSF: return "PrabhakarSF";
    case Method::DjrbashianSF: return "DjrbashianSF";
    case Method::Balanced: return "Balanced";
    case Method::Exact0: return "Exact0";
    }
    return "Unknown";
}

int series_max_index(const MLParams& p) {
    return static_cast<int>(std::floor((kGammaOverflowArg - p.beta) / p.alpha));
}

double series_admissible_radius(int k, const MLParams& p, double tau) {
    validate(p);
    const int jmax = series_max_index(p);
    if (jmax <= k) return 0.0;
    // (tau Gamma(a Jmax + b) / (Jmax)_k)^(1 / (Jmax - k)), in logarithms.
    double log_ff = 0.0;
    for (int i = 0; i < k; ++i) log_ff += std::log(static_cast<double>(jmax - i));
    const double log_r =
        (std::log(tau) + std::lgamma(p.alpha * jmax + p.beta) - log_ff) / (jmax - k);
    return std::exp(log_r);
}

SeriesResult ml_series_unchecked(cplx z, int k, const MLParams& p, double tau) {
    validate(p);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "ml_series: negative derivative order");
    if (!(tau > kMachineEps)) throw Error(ErrorCode::InvalidArgument, "ml_series: tau <= eps");

    const int jmax = series_max_index(p);
    const double radius = series_admissible_radius(k, p, tau);
    if (std::abs(z) > radius) {
        std::ostringstream os;
        os << "|z| = " << std::abs(z) << " exceeds series radius " << radius;
        throw Error(ErrorCode::ArgumentOutOfRange, os.str());
    }

    struct Term {
        double mod;
        int j;
        cplx c;
    };
    std::vector<Term> terms;
    terms.reserve(64);

    cplx zpow{1.0, 0.0};
    bool converged = false;
    double prev_mod = 0.0;
    for (int j = k; j <= jmax; ++j) {
        const double g_arg = p.alpha * j + p.beta;
        const cplx c = falling_factorial(j, k) * rgamma(g_arg) * zpow;
        const double m = std::abs(c);
        terms.push_back({m, j, c});
        // Past the minimum of Gamma the term ratio decreases monotonically, so
        // the first term below tau that is also smaller than its predecessor
        // bounds the tail.
        if (j > k && g_arg >= 2.0 && m < tau && m <= prev_mod) {
            converged = true;
            break;
        }
        if (z == cplx{0.0, 0.0}) {
            converged = true;
            break;
        }
        prev_mod = m;
        zpow *= z;
    }
    if (!converged)
        throw Error(ErrorCode::ArgumentOutOfRange, "ml_series: no convergence before Gamma overflow");

    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return a.mod < b.mod || (a.mod == b.mod && a.j < b.j);
    });

    const int J = static_cast<int>(terms.size()) - 1;
    cplx sum = terms[0].c;
    double coarse = J * terms[0].mod;
    double sharp = 0.0;
    for (int j = 1; j <= J; ++j) {
        sum += terms[j].c;
        coarse += (J - j + 1) * terms[j].mod;
        sharp += std::abs(sum);
    }

    SeriesResult r;
    r.bounds.bound_coarse = kMachineEps * coarse;
    r.bounds.bound_sharp = kMachineEps * sharp;
    r.bounds.bound_used = 0.5 * (r.bounds.bound_coarse + r.bounds.bound_sharp);
    r.eval.value = sum;
    r.eval.k = k;
    r.eval.method = Method::Series;
    r.eval.err_estimate = r.bounds.bound_used;
    r.eval.terms_or_nodes = J + 1;
    return r;
}

SeriesResult ml_series(cplx z, int k, const MLParams& p, double tau) {
    SeriesResult r = ml_series_unchecked(z, k, p, tau);
    const cplx sum = r.eval.value;
    if (r.eval.err_estimate > tau * (1.0 + std::abs(sum))) {
        std::ostringstream os;
        os << "series round-off estimate " << r.eval.err_estimate << " above target";
        throw Error(ErrorCode::AccuracyLost, os.str());
    }
    return r;
}

}  // namespace mlmat

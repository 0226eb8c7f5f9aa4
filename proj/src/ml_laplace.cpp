#include "mlmat/errors.hpp"
#include "mlmat/gamma.hpp"
#include "mlmat/ml_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mlmat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
const double kLogEps = std::log(kMachineEps);

// Most nodes we accept before relaxing the target by one decade.
constexpr int kMaxNodes = 1000;

// For a point s, the parameter mu of the parabola sigma(u) = mu (iu+1)^2
// passing through it: s lies right of the contour iff phi(s) > mu.
double parabola_phi(cplx s) { return 0.5 * (s.real() + std::abs(s)); }

struct Quadrature {
    double mu = 0.0;
    double h = 0.0;
    double N = kInf;
};

// Parameters for a contour that runs between two singularities with
// parabola parameters phi_j < phi_j1 and strengths pj, qj, balancing
// discretisation and truncation errors for the target exp(log_tol).
Quadrature optimal_bounded(double phi_j, double phi_j1, double pj, double qj, double log_tol) {
    constexpr double fac = 1.01;
    const double f_max = std::exp(log_tol - kLogEps);

    const double sq_phi_j = std::sqrt(phi_j);
    const double threshold = 2.0 * std::sqrt(log_tol - kLogEps);
    const double sq_phi_j1 = std::min(std::sqrt(phi_j1), threshold - sq_phi_j);

    double f_bar = 1.0;
    double sqb_j = sq_phi_j;
    double sqb_j1 = sq_phi_j1;
    bool admissible = false;

    const bool p_zero = pj < 1e-14;
    const bool q_zero = qj < 1e-14;
    if (p_zero && q_zero) {
        admissible = true;
    } else if (p_zero) {
        const double f_min =
            sq_phi_j > 0.0 ? fac * std::pow(sq_phi_j / (sq_phi_j1 - sq_phi_j), qj) : fac;
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fq = std::pow(f_bar, -1.0 / qj);
            sqb_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq);
            admissible = true;
        }
    } else if (q_zero) {
        const double f_min = fac * std::pow(sq_phi_j1 / (sq_phi_j1 - sq_phi_j), pj);
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / pj);
            sqb_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp);
            admissible = true;
        }
    } else {
        double f_min = fac * (sq_phi_j + sq_phi_j1) /
                       std::pow(sq_phi_j1 - sq_phi_j, std::max(pj, qj));
        if (f_min < f_max) {
            f_min = std::max(f_min, 1.5);
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / pj);
            const double fq = std::pow(f_bar, -1.0 / qj);
            const double w = -phi_j1 / log_tol;
            const double den = 2.0 + w - (1.0 + w) * fp + fq;
            sqb_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
            sqb_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
            admissible = true;
        }
    }
    if (!admissible) return {};

    const double log_t = log_tol - std::log(f_bar);
    const double w = -sqb_j1 * sqb_j1 / log_t;
    Quadrature q;
    q.mu = std::pow(((1.0 + w) * sqb_j + sqb_j1) / (2.0 + w), 2);
    q.h = -2.0 * kPi / log_t * (sqb_j1 - sqb_j) / ((1.0 + w) * sqb_j + sqb_j1);
    q.N = std::ceil(std::sqrt(1.0 - log_t / q.mu) / q.h);
    if (!(q.h > 0.0) || !std::isfinite(q.N)) return {};
    return q;
}

// Parameters for the unbounded region right of the last singularity.
Quadrature optimal_unbounded(double phi_j, double pj, double log_tol) {
    const double sq_phi_j = std::sqrt(phi_j);
    double phib = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
    double sqb = std::sqrt(phib);

    constexpr double f_min = 1.0, f_max = 10.0, f_tar = 5.0;

    double N = 0.0, A = 0.0, sq_mu = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double log_eps_phi = log_tol / phib;
        N = std::ceil(phib / kPi * (1.0 - 1.5 * log_eps_phi + std::sqrt(1.0 - 2.0 * log_eps_phi)));
        A = kPi * N / phib;
        sq_mu = sqb * std::abs(4.0 - A) / std::abs(7.0 - std::sqrt(1.0 + 12.0 * A));
        const double fbar = std::pow((sqb - sq_phi_j) / sq_mu, -pj);
        if (pj < 1e-14 || (f_min < fbar && fbar < f_max)) break;
        sqb = std::pow(f_tar, -1.0 / pj) * sq_mu + sq_phi_j;
        phib = sqb * sqb;
    }

    Quadrature q;
    q.mu = sq_mu * sq_mu;
    q.N = N;
    q.h = (-3.0 * A - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * A)) / (4.0 - A) / N;

    // Keep the contour left enough that round-off stays below the target.
    const double threshold = log_tol - kLogEps;
    if (q.mu > threshold) {
        const double Q = std::abs(pj) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / pj) * std::sqrt(q.mu);
        const double phib2 = std::pow(Q + sq_phi_j, 2);
        if (phib2 < threshold) {
            const double w = std::sqrt(kLogEps / (kLogEps - log_tol));
            const double u = std::sqrt(-phib2 / kLogEps);
            q.mu = threshold;
            q.N = std::ceil(w * log_tol / (2.0 * kPi * (u * w - 1.0)));
            q.h = std::sqrt(kLogEps / (kLogEps - log_tol)) / q.N;
        } else {
            return {};
        }
    }
    if (!(q.h > 0.0) || !(q.N > 0.0)) return {};
    return q;
}

cplx ipow(cplx x, int n) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

std::vector<cplx> pole_set(cplx z, double alpha) {
    if (z == cplx{0.0, 0.0}) throw Error(ErrorCode::InvalidArgument, "pole_set: z = 0");
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "pole_set: alpha <= 0");
    double theta = std::arg(z);
    if (theta == -kPi) theta = kPi;  // principal argument in (-pi, pi]
    const double lo = -alpha / 2.0 - theta / (2.0 * kPi);
    const double hi = alpha / 2.0 - theta / (2.0 * kPi);
    const long long jmin = static_cast<long long>(std::floor(lo)) + 1;
    const long long jmax = static_cast<long long>(std::floor(hi));
    const double r = std::pow(std::abs(z), 1.0 / alpha);
    std::vector<cplx> poles;
    for (long long j = jmin; j <= jmax; ++j) {
        const double ang = (theta + 2.0 * kPi * static_cast<double>(j)) / alpha;
        if (ang <= -kPi || ang > kPi) continue;
        poles.push_back(std::polar(r, ang));
    }
    return poles;
}

cplx ResiduePoly::operator()(cplx x) const {
    cplx r{0.0, 0.0};
    for (auto it = p_coeffs.rbegin(); it != p_coeffs.rend(); ++it) r = r * x + *it;
    return r;
}

ResiduePoly residue_poly(int k, const MLParams& p) {
    validate(p);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "residue_poly: negative order");
    const double a = p.alpha;
    ResiduePoly rp;
    rp.k = k;
    rp.h_coeffs.assign(k + 1, 0.0);
    rp.h_coeffs[0] = 1.0;
    // Reciprocal (k+1)-th power of 1 + (1/a) sum_j binom(a, j+1) w^j.
    for (int j = 1; j <= k; ++j) {
        double s = 0.0;
        for (int l = 1; l <= j; ++l)
            s += binomial(a, l + 1) * (static_cast<double>(k * l) / j + 1.0) * rp.h_coeffs[j - l];
        rp.h_coeffs[j] = -s / a;
    }
    rp.p_coeffs.assign(k + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
        double s = 0.0;
        for (int l = 0; l <= k - j; ++l)
            s += falling_factorial(a - p.beta, l) / factorial(l) * rp.h_coeffs[k - j - l];
        rp.p_coeffs[j] = s / factorial(j);
    }
    return rp;
}

cplx residue_at(cplx s_star, cplx z, int k, const MLParams& p) {
    validate(p);
    const cplx check = std::pow(s_star, p.alpha);
    if (std::abs(check - z) > 1e-8 * std::max(1.0, std::abs(z)))
        throw Error(ErrorCode::InvalidArgument, "residue_at: s* is not a pole of H_k(s; z)");
    const ResiduePoly P = residue_poly(k, p);
    return std::exp(s_star) * std::pow(s_star, 1.0 - p.alpha * k - p.beta) * P(s_star) /
           std::pow(p.alpha, k + 1);
}

bool rational_kernel(const MLParams& p) {
    return p.alpha == 1.0 && p.beta <= 1.0 && p.beta == std::floor(p.beta);
}

ContourSpec contour_select(cplx z, int k, const MLParams& p, double tau) {
    validate(p);
    if (!(tau > kMachineEps))
        throw Error(ErrorCode::TargetUnreachable, "contour_select: tau must exceed machine epsilon");
    if (z == cplx{0.0, 0.0}) throw Error(ErrorCode::InvalidArgument, "contour_select: z = 0");

    // Rational kernel: the contour can be moved to -infinity, leaving only
    // the residue at s = z.
    if (rational_kernel(p)) {
        ContourSpec spec;
        spec.tol_achieved = tau;
        spec.subtracted_poles.push_back(z);
        return spec;
    }

    // Poles sorted by the parabola through them; those on the negative real
    // axis are left of every contour and need no treatment.
    std::vector<std::pair<double, cplx>> poles;
    for (const cplx& s : pole_set(z, p.alpha)) {
        const double phi = parabola_phi(s);
        if (phi > 1e-15) poles.emplace_back(phi, s);
    }
    std::sort(poles.begin(), poles.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const int J = static_cast<int>(poles.size());
    // Singularities: origin, then poles; strengths left (p) / right (q) of
    // each region between consecutive singularities.
    std::vector<double> phi(J + 2), ps(J + 1), qs(J + 1);
    phi[0] = 0.0;
    ps[0] = std::max(0.0, -2.0 * (p.alpha - p.beta + 1.0));
    for (int j = 0; j < J; ++j) {
        phi[j + 1] = poles[j].first;
        ps[j + 1] = k + 1.0;
        qs[j] = k + 1.0;
    }
    qs[J] = kInf;
    phi[J + 1] = kInf;

    double log_tol = std::log(tau);
    const double round_off_limit = log_tol - kLogEps;
    std::vector<int> regions;
    for (int j = 0; j <= J; ++j)
        if (phi[j] < round_off_limit && phi[j] < phi[j + 1]) regions.push_back(j);
    if (regions.empty())
        throw Error(ErrorCode::TargetUnreachable, "contour_select: no admissible region");

    // Relax the target by a decade at a time until some region needs an
    // acceptable number of nodes.
    Quadrature best;
    int best_region = -1;
    for (int attempt = 0; attempt < 14; ++attempt) {
        best = {};
        best_region = -1;
        for (int j : regions) {
            const Quadrature q = (j < J) ? optimal_bounded(phi[j], phi[j + 1], ps[j], qs[j], log_tol)
                                         : optimal_unbounded(phi[j], ps[j], log_tol);
            if (q.N < best.N) {
                best = q;
                best_region = j;
            }
        }
        if (best_region >= 0 && best.N <= kMaxNodes) break;
        log_tol += std::log(10.0);
    }
    if (best_region < 0 || !(best.N <= kMaxNodes) || log_tol >= 0.0)
        throw Error(ErrorCode::TargetUnreachable, "contour_select: no contour meets any target");

    ContourSpec spec;
    spec.mu = best.mu;
    spec.h = best.h;
    spec.N = static_cast<int>(best.N);
    spec.tol_achieved = std::exp(log_tol);
    for (int j = best_region; j < J; ++j) spec.subtracted_poles.push_back(poles[j].second);
    return spec;
}

DerivEval lt_derivative(cplx z, int k, const MLParams& p, double tau) {
    validate(p);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "lt_derivative: negative order");
    if (z == cplx{0.0, 0.0}) throw Error(ErrorCode::InvalidArgument, "lt_derivative: z = 0");

    const ContourSpec spec = contour_select(z, k, p, tau);
    const double a = p.alpha;
    const cplx I{0.0, 1.0};

    auto integrand = [&](double u) {
        const cplx w = I * u + 1.0;
        const cplx s = spec.mu * w * w;
        const cplx ds = 2.0 * spec.mu * I * w;
        const cplx sa = std::pow(s, a);
        return std::exp(s) * std::pow(s, a - p.beta) / ipow(sa - z, k + 1) * ds;
    };

    // Sum from the tails inwards; integrand magnitudes grow towards u = 0.
    cplx acc{0.0, 0.0};
    if (spec.N > 0) {
        for (int j = spec.N; j >= 1; --j) {
            const double u = j * spec.h;
            acc += integrand(u) + integrand(-u);
        }
        acc += integrand(0.0);
    }

    const double kf = factorial(k);
    cplx value = kf * spec.h * acc / (2.0 * kPi * I);
    for (const cplx& s : spec.subtracted_poles) value += kf * residue_at(s, z, k, p);
    if (z.imag() == 0.0) value = value.real();

    DerivEval e;
    e.value = value;
    e.k = k;
    e.method = Method::LaplaceInversion;
    e.err_estimate = spec.tol_achieved * (1.0 + std::abs(value));
    e.terms_or_nodes = 2 * spec.N + 1;
    e.degraded = spec.tol_achieved > tau * 1.0000001;
    return e;
}

}  // namespace mlmat

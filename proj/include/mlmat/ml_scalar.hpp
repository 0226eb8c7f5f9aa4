#pragma once

// Scalar Mittag-Leffler function E_{a,b}(z) and its derivatives of any order
// for complex z and real parameters.
//
// Three evaluation routes are provided:
//   * the truncated power series with an a-posteriori round-off estimate,
//   * inversion of the Laplace transform on a parabolic contour, with the
//     poles that fall right of the contour removed through their residues,
//   * summation formulas that express the k-th derivative as a linear
//     combination of ML values (or lower-order derivatives) at shifted
//     second parameters.
// ml_derivative() combines them.

#include <cfloat>
#include <complex>
#include <functional>
#include <string_view>
#include <vector>

namespace mlmat {

using cplx = std::complex<double>;

inline constexpr double kMachineEps = DBL_EPSILON;
inline constexpr double kDefaultTau = 1e-15;

struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Throws InvalidArgument unless alpha > 0 and both parameters are finite.
void validate(const MLParams& p);

enum class Method { Series, LaplaceInversion, PrabhakarSF, DjrbashianSF, Balanced, Exact0 };

std::string_view to_string(Method m) noexcept;

struct DerivEval {
    cplx value{};
    int k = 0;
    Method method = Method::Series;
    double err_estimate = 0.0;  // absolute, a posteriori
    int terms_or_nodes = 0;
    bool degraded = false;      // err_estimate exceeded the requested tolerance
};

struct SeriesBounds {
    double bound_coarse = 0.0;
    double bound_sharp = 0.0;
    double bound_used = 0.0;
};

struct SeriesResult {
    DerivEval eval;
    SeriesBounds bounds;
};

// ---------------------------------------------------------------------------
// Truncated series

/// Index of the last term the series may use before Gamma overflows.
int series_max_index(const MLParams& p);

/// Largest |z| for which the series truncated at series_max_index() can
/// reach the absolute target tau for the k-th derivative.
double series_admissible_radius(int k, const MLParams& p, double tau);

/// k-th derivative by the truncated series, terms added in ascending order
/// of modulus.
///
/// The error estimate is the arithmetic mean of a term-weighted bound and a
/// partial-sum bound on the accumulated round-off. Throws
/// ArgumentOutOfRange when |z| exceeds the admissible radius and
/// AccuracyLost when the estimate exceeds tau * (1 + |sum|).
SeriesResult ml_series(cplx z, int k, const MLParams& p, double tau = kDefaultTau);

/// ml_series without the final acceptance test (still range-checked).
SeriesResult ml_series_unchecked(cplx z, int k, const MLParams& p, double tau = kDefaultTau);

// ---------------------------------------------------------------------------
// Laplace transform inversion

/// Nonzero poles of s^(a-b) / (s^a - z)^(k+1) in the principal sheet,
/// i.e. the roots of s^a = z with -pi < Arg(s) <= pi.
std::vector<cplx> pole_set(cplx z, double alpha);

/// Polynomial P_k appearing in the residue of e^s H_k(s; z) at a pole.
struct ResiduePoly {
    int k = 0;
    std::vector<double> p_coeffs;  // p_0 .. p_k, ascending powers
    std::vector<double> h_coeffs;  // H_0 .. H_k

    cplx operator()(cplx x) const;
};

ResiduePoly residue_poly(int k, const MLParams& p);

/// Res(e^s H_k(s; z), s*) = a^-(k+1) e^{s*} (s*)^(1 - a k - b) P_k(s*).
/// Throws InvalidArgument if s_star is not a root of s^a = z.
cplx residue_at(cplx s_star, cplx z, int k, const MLParams& p);

struct ContourSpec {
    double mu = 0.0;  // sigma(u) = mu (i u + 1)^2
    double h = 0.0;
    int N = 0;        // nodes u_j = j h, j = -N..N
    std::vector<cplx> subtracted_poles;
    double tol_achieved = 0.0;  // target after any degradation
};

/// True when H_k(s; z) is a rational function of s (alpha = 1 and integer
/// beta <= 1): no branch point at the origin, a single pole at s = z.
bool rational_kernel(const MLParams& p);

/// Chooses the parabolic contour for the k-th derivative at z.
/// For a rational kernel the contour is pushed to -infinity: N = 0 and the
/// result is the residue at s = z alone. Throws TargetUnreachable when
/// tau <= machine epsilon or no admissible contour exists even after
/// relaxing the target.
ContourSpec contour_select(cplx z, int k, const MLParams& p, double tau);

/// k-th derivative by trapezoidal quadrature on the contour plus the
/// residues of the poles lying right of it.
DerivEval lt_derivative(cplx z, int k, const MLParams& p, double tau = kDefaultTau);

// ---------------------------------------------------------------------------
// Summation formulas

struct SFCoeffs {
    int k = 0;
    std::vector<double> c;  // c_0 .. c_k, c_k == 1
};

SFCoeffs djrbashian_coeffs(int k, const MLParams& p);

/// Evaluates E_{a,b}(z) for the parameters given.
using ScalarMLEvaluator = std::function<DerivEval(cplx z, const MLParams& p)>;
/// Evaluates the given derivative order of E_{a,b}(z).
using DerivativeEvaluator = std::function<DerivEval(cplx z, int order, const MLParams& p)>;

/// (a z)^-k sum_j c_j E_{a, b-j}(z). Not valid at z = 0 and loses accuracy
/// near it through cancellation.
DerivEval sf_djrbashian(cplx z, int k, const MLParams& p, const ScalarMLEvaluator& ml_eval);

/// a^-k sum_j c_j E_{a, a k + b - j}(z). Valid at z = 0.
DerivEval sf_prabhakar(cplx z, int k, const MLParams& p, const ScalarMLEvaluator& ml_eval);

/// a^-(k-q) sum_j c^{(k-q)}_j d^q/dz^q E_{a, (k-q) a + b - j}(z).
DerivEval balanced_derivative(cplx z, int k, int q, const MLParams& p,
                              const DerivativeEvaluator& deriv_eval);

// ---------------------------------------------------------------------------
// Combined algorithm

struct DispatchOptions {
    double cancellation_radius = 5.0;
    int balancing_threshold = 3;  // use q = 1 balancing from this order on
};

/// k-th derivative of E_{a,b} at z: exact at the origin, the residue alone
/// for a rational kernel, the series where
/// its own estimate accepts it, otherwise the Prabhakar summation formula on
/// top of contour integrals, balanced to first derivatives for high orders.
/// The result is flagged `degraded` (never silently) when its estimate
/// exceeds tau * (1 + |value|).
DerivEval ml_derivative(cplx z, int k, const MLParams& p, double tau = kDefaultTau,
                        const DispatchOptions& opts = {});

/// Shorthand for ml_derivative(z, 0, p, tau).
DerivEval ml_value(cplx z, const MLParams& p, double tau = kDefaultTau);

}  // namespace mlmat

#include "mlmat/fde.hpp"

#include "mlmat/errors.hpp"
#include "mlmat/gamma.hpp"
#include "mlmat/matrix_ml.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace mlmat {

namespace {

int ceil_order(double alpha) { return std::max(1, static_cast<int>(std::ceil(alpha - 1e-12))); }

void check_system(const LinearFdeSystem& sys, const char* who) {
    if (!(sys.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(who) + ": alpha <= 0");
    const Eigen::Index n = sys.A.rows();
    if (n == 0 || sys.A.cols() != n)
        throw Error(ErrorCode::DimensionError, std::string(who) + ": A must be square");
    if (static_cast<int>(sys.Y0.size()) != ceil_order(sys.alpha))
        throw Error(ErrorCode::DimensionError,
                    std::string(who) + ": need ceil(alpha) initial vectors");
    for (const RVector& y : sys.Y0)
        if (y.size() != n) throw Error(ErrorCode::DimensionError, std::string(who) + ": Y0 size");
}

// Homogeneous part sum_l t^l E_{a,l+1}(t^a A) Y0[l].
RVector homogeneous(const LinearFdeSystem& sys, const ScaledMatrixML& E, double t) {
    const double c = std::pow(t, sys.alpha);
    RVector y = RVector::Zero(sys.A.rows());
    for (int l = 0; l < static_cast<int>(sys.Y0.size()); ++l) {
        if (sys.Y0[l].isZero(0.0)) continue;
        y += std::pow(t, l) * (E(c, {sys.alpha, l + 1.0}) * sys.Y0[l]);
    }
    return y;
}

RVector poly_part(const LinearFdeSystem& sys, const PolySource& src, const ScaledMatrixML& E, double t) {
    const double a = sys.alpha;
    const double c = std::pow(t, a);
    RVector y = RVector::Zero(sys.A.rows());
    for (int l = 0; l < static_cast<int>(src.c.size()); ++l) {
        if (src.c[l] == 0.0) continue;
        y += factorial(l) * src.c[l] * std::pow(t, a + l) * (E(c, {a, a + l + 1.0}) * src.b);
    }
    return y;
}

// I^beta t^j = j! / Gamma(j + 1 + beta) t^{j + beta}.
double rl_integral_monomial(int j, double beta, double t) {
    if (t == 0.0) return 0.0;
    return factorial(j) * rgamma(j + 1.0 + beta) * std::pow(t, j + beta);
}

// Fractional trapezoidal weights for I^beta at t_i, without h^beta/Gamma(beta+2).
double trap_weight(int i, int j, double beta) {
    if (j == i) return 1.0;
    if (j == 0) return std::pow(i - 1.0, beta + 1.0) - (i - beta - 1.0) * std::pow(i, beta);
    const double d = i - j;
    return std::pow(d + 1.0, beta + 1.0) - 2.0 * std::pow(d, beta + 1.0) + std::pow(d - 1.0, beta + 1.0);
}

}  // namespace

ScaledMatrixML::ScaledMatrixML(const RMatrix& A, double tau)
    : schur_(schur_decompose(A.cast<cplx>())), n_(A.rows()), tau_(tau) {}

RMatrix ScaledMatrixML::operator()(double c, const MLParams& p) const {
    return ml_matrix_scaled(schur_, true, c, p, tau_).value.real();
}

RVector solve_linear_fde(const LinearFdeSystem& sys, double t, double tau) {
    check_system(sys, "solve_linear_fde");
    if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "solve_linear_fde: t < 0");
    if (t == 0.0) return sys.Y0[0];
    return homogeneous(sys, ScaledMatrixML(sys.A, tau), t);
}

CompanionSystem companion_from_multiterm(const MultitermFde& mt) {
    if (mt.alpha.p < 1 || mt.alpha.q < 1 || mt.alpha.p > mt.alpha.q)
        throw Error(ErrorCode::IrrationalOrder, "companion_from_multiterm: need alpha = p/q in (0, 1]");
    const long g = std::gcd(mt.alpha.p, mt.alpha.q);
    const int p = static_cast<int>(mt.alpha.p / g), q = static_cast<int>(mt.alpha.q / g);
    const int n = static_cast<int>(mt.a.size()) - 1;
    if (n < 1 || mt.a[n] == 0.0)
        throw Error(ErrorCode::InvalidArgument, "companion_from_multiterm: need a[n] != 0, n >= 1");
    const int N = n * p;
    const int m = static_cast<int>(std::ceil(static_cast<double>(n * p) / q - 1e-12));
    if (static_cast<int>(mt.b.size()) > m)
        throw Error(ErrorCode::DimensionError, "companion_from_multiterm: too many initial values");

    CompanionSystem cs;
    cs.system.alpha = 1.0 / q;
    cs.system.A = RMatrix::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) cs.system.A(i, i + 1) = 1.0;
    for (int k = 0; k < n; ++k) cs.system.A(N - 1, k * p) -= mt.a[k] / mt.a[n];
    RVector y0 = RVector::Zero(N);
    for (int j = 0; j < static_cast<int>(mt.b.size()); ++j) y0(j * q) = mt.b[j];
    cs.system.Y0 = {y0};
    cs.e_N = RVector::Zero(N);
    cs.e_N(N - 1) = 1.0 / mt.a[n];
    cs.readout = 0;
    return cs;
}

RVector solve_poly_source(const LinearFdeSystem& sys, const PolySource& src, double t, double tau) {
    return solve_poly_source(sys, src, std::vector<double>{t}, tau).front();
}

std::vector<RVector> solve_poly_source(const LinearFdeSystem& sys, const PolySource& src,
                                       const std::vector<double>& times, double tau) {
    check_system(sys, "solve_poly_source");
    if (src.b.size() != sys.A.rows())
        throw Error(ErrorCode::DimensionError, "solve_poly_source: forcing direction size");
    const ScaledMatrixML E(sys.A, tau);
    std::vector<RVector> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "solve_poly_source: t < 0");
        if (t == 0.0) {
            out.push_back(sys.Y0[0]);
            continue;
        }
        out.push_back(homogeneous(sys, E, t) + poly_part(sys, src, E, t));
    }
    return out;
}

RVector solve_sampled_source(const LinearFdeSystem& sys, const SampledSource& F, double t,
                             int nodes, double tau) {
    check_system(sys, "solve_sampled_source");
    if (nodes < 2) throw Error(ErrorCode::NodeBudget, "solve_sampled_source: nodes < 2");
    if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "solve_sampled_source: t < 0");
    if (t == 0.0) return sys.Y0[0];

    const double a = sys.alpha;
    const Eigen::Index n = sys.A.rows();
    const ScaledMatrixML E(sys.A, tau);
    const double H = t / nodes;

    // Phi_r(x) = int_0^x K(x - v) v^r dv = r! x^{a+r} E_{a,a+r+1}(x^a A) at x = j H.
    std::vector<std::array<RMatrix, 3>> phi(nodes + 1);
    for (int j = 0; j <= nodes; ++j) {
        for (int r = 0; r < 3; ++r) {
            if (j == 0) {
                phi[j][r] = RMatrix::Zero(n, n);
                continue;
            }
            const double x = j * H;
            phi[j][r] = factorial(r) * std::pow(x, a + r) * E(std::pow(x, a), {a, a + r + 1.0});
        }
    }

    RVector y = homogeneous(sys, E, t);
    RVector f0 = F(0.0);
    if (f0.size() != n) throw Error(ErrorCode::DimensionError, "solve_sampled_source: F size");
    for (int i = 0; i < nodes; ++i) {
        const double s0 = i * H;
        const RVector fm = F(s0 + 0.5 * H);
        const RVector f1 = F(s0 + H);
        // Interpolant p0 + p1 w + p2 w^2 with w = s - s0.
        const std::array<RVector, 3> pc = {f0, (-3.0 * f0 + 4.0 * fm - f1) / H,
                                           (2.0 * f0 - 4.0 * fm + 2.0 * f1) / (H * H)};
        const int far = nodes - i, near = nodes - i - 1;  // t - s0 = far H, t - s1 = near H
        for (int l = 0; l < 3; ++l) {
            // int_{s0}^{s1} K(t-s)(s-s0)^l ds = Phi_l(t-s0) - sum_r C(l,r) H^{l-r} Phi_r(t-s1)
            RMatrix W = phi[far][l];
            for (int r = 0; r <= l; ++r) W -= binomial(l, r) * std::pow(H, l - r) * phi[near][r];
            y += W * pc[l];
        }
        f0 = f1;
    }
    return y;
}

Trajectory trapezoidal_pi(const MultitermFde& mt, double h, double T) {
    if (!(h > 0.0) || !(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "trapezoidal_pi: h, T > 0");
    if (mt.alpha.p < 1 || mt.alpha.q < 1)
        throw Error(ErrorCode::IrrationalOrder, "trapezoidal_pi: alpha must be p/q with p, q >= 1");
    const int n = static_cast<int>(mt.a.size()) - 1;
    if (n < 1 || mt.a[n] == 0.0) throw Error(ErrorCode::InvalidArgument, "trapezoidal_pi: a[n] == 0");
    const double alpha = static_cast<double>(mt.alpha.p) / mt.alpha.q;
    const int steps = static_cast<int>(std::lround(T / h));
    if (std::abs(steps * h - T) > 1e-9 * T)
        throw Error(ErrorCode::InvalidArgument, "trapezoidal_pi: h must divide T");

    const double gn = n * alpha;
    auto b_at = [&](int j) { return j < static_cast<int>(mt.b.size()) ? mt.b[j] : 0.0; };
    // Taylor polynomial of order ceil(g) - 1 built from the initial values.
    auto taylor = [&](double g, double t) {
        double s = 0.0;
        for (int j = 0; j < static_cast<int>(std::ceil(g - 1e-12)); ++j) s += b_at(j) * std::pow(t, j) / factorial(j);
        return s;
    };
    auto taylor_integral = [&](double g, double beta, double t) {
        double s = 0.0;
        for (int j = 0; j < static_cast<int>(std::ceil(g - 1e-12)); ++j)
            s += b_at(j) / factorial(j) * rl_integral_monomial(j, beta, t);
        return s;
    };

    // a_n (y - T_n) + sum_{k<n} a_k I^{g_n - g_k}(y - T_k) = I^{g_n} f.
    std::vector<double> beta(n), scale(n);
    for (int k = 0; k < n; ++k) {
        beta[k] = gn - k * alpha;
        scale[k] = std::pow(h, beta[k]) * rgamma(beta[k] + 2.0);
    }
    Trajectory tr;
    tr.t.resize(steps + 1);
    tr.y.resize(steps + 1);
    tr.t[0] = 0.0;
    tr.y[0] = b_at(0);
    for (int i = 1; i <= steps; ++i) {
        const double ti = i * h;
        double rhs = 0.0;
        for (int l = 0; l < static_cast<int>(mt.f.size()); ++l)
            rhs += mt.f[l] * rl_integral_monomial(l, gn, ti);
        rhs += mt.a[n] * taylor(gn, ti);
        double diag = mt.a[n];
        for (int k = 0; k < n; ++k) {
            if (mt.a[k] == 0.0) continue;
            double hist = 0.0;
            for (int j = 0; j < i; ++j) hist += trap_weight(i, j, beta[k]) * tr.y[j];
            rhs -= mt.a[k] * (scale[k] * hist - taylor_integral(k * alpha, beta[k], ti));
            diag += mt.a[k] * scale[k];
        }
        tr.t[i] = ti;
        tr.y[i] = rhs / diag;
    }
    return tr;
}

void gauss_jacobi01(int n, double c, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw Error(ErrorCode::NodeBudget, "gauss_jacobi01: n < 1");
    if (!(c > -1.0)) throw Error(ErrorCode::InvalidArgument, "gauss_jacobi01: exponent <= -1");
    // Jacobi weight (1-x)^0 (1+x)^c on [-1, 1].
    const double a = 0.0, b = c;
    RMatrix J = RMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        J(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double kk = k + 1.0, s1 = 2.0 * kk + a + b;
            const double num = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b);
            const double den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            J(k, k + 1) = J(k + 1, k) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(J);
    const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                                std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    x.resize(n);
    w.resize(n);
    const double map = std::pow(2.0, -c - 1.0);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        x[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
        w[i] = map * mu0 * v0 * v0;
    }
}

GramianResult gramian(GramianKind kind, const RMatrix& A, const RMatrix& BC, double alpha, double t,
                      int nodes, double tau) {
    if (nodes < 2) throw Error(ErrorCode::NodeBudget, "gramian: nodes < 2");
    if (!(alpha > 0.0) || !(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "gramian: alpha, t > 0");
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw Error(ErrorCode::DimensionError, "gramian: A not square");
    const bool ctrl = kind == GramianKind::Controllability;
    if ((ctrl && BC.rows() != n) || (!ctrl && BC.cols() != n))
        throw Error(ErrorCode::DimensionError, "gramian: B or C not conformal with A");

    const ScaledMatrixML E(A, tau);
    const RMatrix BBt = ctrl ? RMatrix(BC * BC.transpose()) : RMatrix(BC.transpose() * BC);
    auto integrate = [&](int m) {
        std::vector<double> v, w;
        gauss_jacobi01(m, 1.0 / alpha - 1.0, v, w);
        RMatrix G = RMatrix::Zero(n, n);
        const double ta = std::pow(t, alpha);
        for (int i = 0; i < m; ++i) {
            const RMatrix K = E(ta * v[i], {alpha, alpha});
            G += w[i] * (ctrl ? RMatrix(K * BBt * K.transpose()) : RMatrix(K.transpose() * BBt * K));
        }
        G *= t / alpha;
        return RMatrix(0.5 * (G + G.transpose()));
    };

    GramianResult res;
    res.G = integrate(nodes);
    const RMatrix G2 = integrate(2 * nodes);
    const double gn = res.G.norm();
    res.richardson_delta = gn > 0.0 ? (res.G - G2).norm() / gn : 0.0;
    Eigen::SelfAdjointEigenSolver<RMatrix> es(res.G);
    res.min_eigenvalue = es.eigenvalues().minCoeff();
    const double tol = 1e-10 * std::max(gn, 1e-300);
    res.positive_semidefinite = res.min_eigenvalue >= -tol;
    res.positive_definite = res.min_eigenvalue > tol;
    return res;
}

}  // namespace mlmat

#pragma once

// Linear fractional differential equations (Caputo derivatives) solved
// through matrix Mittag-Leffler functions, plus a product-integration
// comparator for multiterm equations and Gramians of fractional systems.

#include "mlmat/funm.hpp"
#include "mlmat/ml_scalar.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace mlmat {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// D^alpha Y = A Y (+ forcing), with Y0[l] = Y^(l)(0), l < ceil(alpha).
struct LinearFdeSystem {
    RMatrix A;
    double alpha = 1.0;
    std::vector<RVector> Y0;
};

/// Forcing f(t) b with f(t) = sum_l c[l] t^l.
struct PolySource {
    std::vector<double> c;
    RVector b;
};

using SampledSource = std::function<RVector(double t)>;

struct Rational {
    long p = 1;
    long q = 1;
};

/// sum_{k=0}^{n} a[k] D^{k alpha} y = f(t), alpha = p/q in (0, 1), with
/// b[j] = y^(j)(0) for j < ceil(n alpha) and polynomial forcing
/// f(t) = sum_l f[l] t^l.
struct MultitermFde {
    std::vector<double> a;
    Rational alpha;
    std::vector<double> b;
    std::vector<double> f;
};

/// E_{a,b}(c A) for many scales c from one Schur factorization of A.
class ScaledMatrixML {
public:
    explicit ScaledMatrixML(const RMatrix& A, double tau = kDefaultTau);

    RMatrix operator()(double c, const MLParams& p) const;
    Eigen::Index size() const { return n_; }

private:
    SchurForm schur_;
    Eigen::Index n_ = 0;
    double tau_;
};

/// Y(t) = sum_{l < ceil(alpha)} t^l E_{alpha,l+1}(t^alpha A) Y0[l].
RVector solve_linear_fde(const LinearFdeSystem& sys, double t, double tau = kDefaultTau);

struct CompanionSystem {
    LinearFdeSystem system;  // order 1/q, dimension N = n p
    RVector e_N;             // forcing direction, scaled by 1/a[n]
    int readout = 0;         // y(t) is this component of Y(t)
};

/// Companion form in the unknowns Y_i = D^{i/q} y, i = 0..N-1. The initial
/// vector carries b[j] in component j q and zeros elsewhere. Throws
/// IrrationalOrder unless 0 < p/q <= 1 with p, q >= 1.
CompanionSystem companion_from_multiterm(const MultitermFde& mt);

/// Closed form for polynomial forcing:
/// Y(t) = sum_l t^l E_{a,l+1}(t^a A) Y0[l] + sum_l l! c_l t^{a+l} E_{a,a+l+1}(t^a A) b.
RVector solve_poly_source(const LinearFdeSystem& sys, const PolySource& src, double t,
                          double tau = kDefaultTau);

/// Same closed form on a grid of times, reusing one factorization of A.
std::vector<RVector> solve_poly_source(const LinearFdeSystem& sys, const PolySource& src,
                                       const std::vector<double>& times, double tau = kDefaultTau);

/// Homogeneous solution plus the convolution with the kernel
/// u^{a-1} E_{a,a}(u^a A), the forcing replaced on each of `nodes` equal
/// intervals by its quadratic interpolant (ends and midpoint) and integrated
/// against the kernel exactly. Throws NodeBudget when nodes < 2.
RVector solve_sampled_source(const LinearFdeSystem& sys, const SampledSource& F, double t,
                             int nodes, double tau = kDefaultTau);

struct Trajectory {
    std::vector<double> t;
    std::vector<double> y;
};

/// Fractional trapezoidal product integration of the integral form of a
/// multiterm equation on t_j = j h, j = 0..round(T/h).
Trajectory trapezoidal_pi(const MultitermFde& mt, double h, double T);

enum class GramianKind { Controllability, Observability };

struct GramianResult {
    RMatrix G;                    // symmetrized
    double min_eigenvalue = 0.0;
    bool positive_semidefinite = false;
    bool positive_definite = false;
    double richardson_delta = 0.0;  // ||G(nodes) - G(2 nodes)||_F / ||G||_F
};

/// Controllability: int_0^t E_{a,a}(u^a A) B B^T E_{a,a}(u^a A^T) du.
/// Observability: int_0^t E_{a,a}(u^a A^T) C^T C E_{a,a}(u^a A) du.
/// Gauss-Jacobi quadrature after u = t v^{1/a}, which makes the integrand
/// analytic in v; repeated with 2 nodes for the Richardson check.
GramianResult gramian(GramianKind kind, const RMatrix& A, const RMatrix& BC, double alpha, double t,
                      int nodes = 64, double tau = kDefaultTau);

/// Nodes and weights for int_0^1 v^c g(v) dv, c > -1 (Golub-Welsch).
void gauss_jacobi01(int n, double c, std::vector<double>& x, std::vector<double>& w);

}  // namespace mlmat

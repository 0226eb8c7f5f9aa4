#include "mlmat/conditioning.hpp"

#include "mlmat/errors.hpp"
#include "mlmat/matrix_ml.hpp"

#include <algorithm>
#include <random>

namespace mlmat {

double matrix_norm(const CMatrix& X, NormKind kind) {
    if (kind == NormKind::Frobenius) return X.norm();
    return X.cwiseAbs().colwise().sum().maxCoeff();
}

CMatrix frechet_apply(const CMatrix& A, const CMatrix& E, const MatrixFunction& f) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || E.rows() != n || E.cols() != n)
        throw Error(ErrorCode::DimensionError, "frechet_apply: A and E must be square of equal size");
    CMatrix B = CMatrix::Zero(2 * n, 2 * n);
    B.topLeftCorner(n, n) = A;
    B.bottomRightCorner(n, n) = A;
    B.topRightCorner(n, n) = E;
    return f(B).topRightCorner(n, n);
}

CondReport cond_estimate(const CMatrix& A, const MatrixFunction& f, int probes, NormKind norm,
                         int max_iterations) {
    if (probes < 1) throw Error(ErrorCode::InvalidArgument, "cond_estimate: probes < 1");
    const Eigen::Index n = A.rows();
    if (n == 0 || A.cols() != n) throw Error(ErrorCode::DimensionError, "cond_estimate: A not square");

    const double fnorm = matrix_norm(f(A), norm);
    if (!(fnorm > 0.0)) throw Error(ErrorCode::ZeroFunctionNorm, "cond_estimate: ||f(A)|| = 0");

    const CMatrix Astar = A.adjoint();
    const bool real = A.imag().isZero(0.0);
    CondReport rep;
    rep.norm_used = norm;
    rep.probes = probes;
    rep.evaluations = 1;

    for (int probe = 0; probe < probes; ++probe) {
        std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned long long>(probe));
        std::normal_distribution<double> g;
        CMatrix Z(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) Z(i, j) = real ? cplx(g(rng), 0.0) : cplx(g(rng), g(rng));
        Z /= Z.norm();

        double prev = 0.0;
        for (int it = 0; it < max_iterations; ++it) {
            const CMatrix W = frechet_apply(A, Z, f);
            ++rep.evaluations;
            rep.kappa_abs = std::max(rep.kappa_abs, matrix_norm(W, norm) / matrix_norm(Z, norm));
            const double wn = W.norm();
            if (wn == 0.0) break;
            CMatrix Znext = frechet_apply(Astar, W, f);
            ++rep.evaluations;
            const double gamma = std::sqrt(Znext.norm() / Z.norm());  // ~ ||L||_F
            Z = Znext / Znext.norm();
            if (std::abs(gamma - prev) <= 1e-4 * gamma) break;
            prev = gamma;
        }
    }
    rep.kappa_rel = rep.kappa_abs * matrix_norm(A, norm) / fnorm;
    return rep;
}

CondReport cond_estimate(const CMatrix& A, const MLParams& p, int probes, NormKind norm, double tau) {
    const MatrixFunction f = [&](const CMatrix& X) {
        return ml_matrix({X, p, tau}).value;
    };
    return cond_estimate(A, f, probes, norm);
}

}  // namespace mlmat

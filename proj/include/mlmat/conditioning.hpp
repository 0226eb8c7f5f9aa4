#pragma once

// Frechet derivative and condition number estimates for matrix functions.

#include "mlmat/funm.hpp"
#include "mlmat/ml_scalar.hpp"

#include <functional>

namespace mlmat {

using MatrixFunction = std::function<CMatrix(const CMatrix&)>;

enum class NormKind { One, Frobenius };

struct CondReport {
    double kappa_abs = 0.0;  // lower-bound estimate of ||L(A)||
    double kappa_rel = 0.0;  // kappa_abs ||A|| / ||f(A)||
    NormKind norm_used = NormKind::Frobenius;
    int probes = 0;
    int evaluations = 0;     // matrix function evaluations of size 2n
};

double matrix_norm(const CMatrix& X, NormKind kind);

/// L(A, E) from the upper right block of f([[A, E], [0, A]]).
CMatrix frechet_apply(const CMatrix& A, const CMatrix& E, const MatrixFunction& f);

/// Condition number estimate of f at A by power iteration on E -> L(A, E),
/// with L(A*, .) as the adjoint map (valid for f with real Taylor
/// coefficients). `probes` restarts from seeded random directions; the
/// result is a lower bound. Throws ZeroFunctionNorm when f(A) = 0.
CondReport cond_estimate(const CMatrix& A, const MatrixFunction& f, int probes = 5,
                         NormKind norm = NormKind::Frobenius, int max_iterations = 8);

/// cond_estimate for f = E_{a,b} evaluated by ml_matrix.
CondReport cond_estimate(const CMatrix& A, const MLParams& p, int probes = 5,
                         NormKind norm = NormKind::Frobenius, double tau = kDefaultTau);

}  // namespace mlmat

#pragma once

// E_{a,b}(A) for dense square matrices.

#include "mlmat/funm.hpp"
#include "mlmat/ml_scalar.hpp"

namespace mlmat {

struct MatrixMLRequest {
    CMatrix A;
    MLParams params;
    double tau = kDefaultTau;
    double delta = kDefaultDelta;
};

struct MatrixMLDiagnostics {
    int max_derivative_order = 0;  // highest k requested from ml_derivative
    int max_taylor_terms = 0;
    std::vector<int> block_sizes;
    bool hermitian_path = false;
    bool diagonal_path = false;
    bool real_input = false;
    double discarded_imag = 0.0;   // max |Im| dropped for real input
    double max_err_estimate = 0.0; // worst scalar estimate over all calls
    bool degraded = false;         // some scalar evaluation missed tau
};

struct MatrixMLResult {
    CMatrix value;
    MatrixMLDiagnostics diag;
};

/// Derivative oracle for the Schur-Parlett engine backed by ml_derivative.
/// Degradation and the worst error estimate are recorded in `diag`.
DerivativeOracle ml_derivative_oracle(const MLParams& p, double tau,
                                      MatrixMLDiagnostics* diag = nullptr);

/// E_{a,b}(A). For real A the result is the real part of the computed
/// matrix; the imaginary part dropped is reported.
MatrixMLResult ml_matrix(const MatrixMLRequest& req, const FunmOptions& opts = {});

/// E_{a,b}(c A) from a Schur form of A computed once, for repeated
/// evaluation at different scales c > 0.
MatrixMLResult ml_matrix_scaled(const SchurForm& schur_of_A, bool real_input, double c,
                                const MLParams& p, double tau = kDefaultTau,
                                const FunmOptions& opts = {});

}  // namespace mlmat

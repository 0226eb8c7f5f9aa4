#pragma once

// Schur-Parlett evaluation of a matrix function f(A) from the derivatives
// of the scalar function.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace mlmat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct SchurForm {
    CMatrix Q;  // unitary
    CMatrix T;  // upper triangular, A = Q T Q*
};

struct BlockPattern {
    std::vector<int> cluster_of;  // cluster id of each eigenvalue
    std::vector<int> boundaries;  // block start indices, plus n at the end
    double delta = 0.1;

    int clusters() const;
};

/// Returns f(sigma), f'(sigma), ..., f^(max_order)(sigma).
using DerivativeOracle = std::function<std::vector<cplx>(cplx sigma, int max_order)>;

inline constexpr double kDefaultDelta = 0.1;
inline constexpr int kMaxTaylorOrder = 250;

/// Complex Schur form. Throws NoConvergence if the QR iteration fails.
SchurForm schur_decompose(const CMatrix& A);

/// Connected components of the graph joining eigenvalues closer than delta.
/// Cluster ids follow the smallest member of each cluster in (Re, Im)
/// order. `boundaries` describes the contiguous layout reorder_schur
/// produces.
BlockPattern cluster_eigenvalues(const std::vector<cplx>& eigs, double delta = kDefaultDelta);

struct ReorderedSchur {
    SchurForm schur;
    BlockPattern pattern;  // cluster_of is nondecreasing along the diagonal
};

/// Moves the eigenvalues by adjacent unitary swaps so that every cluster
/// occupies a contiguous diagonal block, clusters in id order. Eigenvalues
/// keep their relative order within a cluster. Throws SwapInstability when a
/// swap leaves a subdiagonal entry larger than the tolerance.
ReorderedSchur reorder_schur(const SchurForm& S, const BlockPattern& pattern);

struct AtomicResult {
    CMatrix F;
    int terms = 0;      // Taylor terms summed
    int max_order = 0;  // highest derivative requested from the oracle
};

/// Taylor expansion of f about the mean of the diagonal of an upper
/// triangular block whose eigenvalues form one cluster. Terminates after m
/// terms when all eigenvalues coincide. Throws SlowTaylorDecay when the
/// terms have not decayed by order `max_order`.
AtomicResult atomic_block_fun(const CMatrix& Tii, const DerivativeOracle& oracle,
                              int max_order = kMaxTaylorOrder);

/// Solves Tii F - F Tjj = C for upper triangular Tii, Tjj by substitution.
/// Throws NearSingularSeparation when two diagonal entries are within
/// `min_separation` of each other.
CMatrix sylvester_triangular(const CMatrix& Tii, const CMatrix& Tjj, const CMatrix& C,
                             double min_separation = 0.0);

struct FunmOptions {
    double delta = kDefaultDelta;
    int max_order = kMaxTaylorOrder;
    bool hermitian_fast_path = true;
};

struct FunmDiagnostics {
    int max_derivative_order = 0;
    int max_taylor_terms = 0;
    std::vector<int> block_sizes;
    bool hermitian_path = false;
    bool diagonal_path = false;
};

/// f(A) by the Schur-Parlett algorithm. Diagonal input is evaluated
/// elementwise and Hermitian input through its spectral decomposition.
CMatrix funm(const CMatrix& A, const DerivativeOracle& oracle, const FunmOptions& opts = {},
             FunmDiagnostics* diag = nullptr);

/// f(T) for upper triangular T (clustering, reordering and the Parlett
/// recurrence, no Schur step). f(A) = Q funm_triangular(T) Q* for a
/// precomputed Schur form of A; the same form serves f(c A) via c T.
CMatrix funm_triangular(const CMatrix& T, const DerivativeOracle& oracle,
                        const FunmOptions& opts = {}, FunmDiagnostics* diag = nullptr);

}  // namespace mlmat

#include "mlmat/funm.hpp"

#include "mlmat/errors.hpp"
#include "mlmat/gamma.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace mlmat {

namespace {

constexpr double kEps = DBL_EPSILON;

bool all_finite(const CMatrix& A) { return A.allFinite(); }

void require_square(const CMatrix& A, const char* who) {
    if (A.rows() != A.cols())
        throw Error(ErrorCode::DimensionError, std::string(who) + ": matrix is not square");
}

// 1/k! without overflow.
double inv_factorial(int k) {
    if (k <= 170) return 1.0 / factorial(k);
    return std::exp(-std::lgamma(k + 1.0));
}

void merge(FunmDiagnostics* d, const AtomicResult& r, int m) {
    if (!d) return;
    d->max_derivative_order = std::max(d->max_derivative_order, r.max_order);
    d->max_taylor_terms = std::max(d->max_taylor_terms, r.terms);
    d->block_sizes.push_back(m);
}

}  // namespace

int BlockPattern::clusters() const {
    return boundaries.empty() ? 0 : static_cast<int>(boundaries.size()) - 1;
}

SchurForm schur_decompose(const CMatrix& A) {
    require_square(A, "schur_decompose");
    if (!all_finite(A)) throw Error(ErrorCode::InvalidArgument, "schur_decompose: non-finite entry");
    const Eigen::Index n = A.rows();
    if (n == 0) return {};
    Eigen::ComplexSchur<CMatrix> cs(n);
    cs.setMaxIterations(60 * n);
    cs.compute(A, true);
    if (cs.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "schur_decompose: QR iteration did not converge");
    SchurForm S;
    S.Q = cs.matrixU();
    S.T = cs.matrixT().triangularView<Eigen::Upper>();
    return S;
}

BlockPattern cluster_eigenvalues(const std::vector<cplx>& eigs, double delta) {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster_eigenvalues: delta <= 0");
    const int n = static_cast<int>(eigs.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(eigs[i] - eigs[j]) <= delta) parent[find(i)] = find(j);

    // Representative = lexicographically smallest member.
    auto less = [&](int a, int b) {
        if (eigs[a].real() != eigs[b].real()) return eigs[a].real() < eigs[b].real();
        if (eigs[a].imag() != eigs[b].imag()) return eigs[a].imag() < eigs[b].imag();
        return a < b;
    };
    std::vector<int> rep(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (rep[r] < 0 || less(i, rep[r])) rep[r] = i;
    }
    std::vector<int> roots;
    for (int i = 0; i < n; ++i)
        if (find(i) == i) roots.push_back(i);
    std::sort(roots.begin(), roots.end(), [&](int a, int b) { return less(rep[a], rep[b]); });

    BlockPattern bp;
    bp.delta = delta;
    bp.cluster_of.assign(n, 0);
    std::vector<int> id_of_root(n, -1);
    for (int c = 0; c < static_cast<int>(roots.size()); ++c) id_of_root[roots[c]] = c;
    std::vector<int> sizes(roots.size(), 0);
    for (int i = 0; i < n; ++i) {
        bp.cluster_of[i] = id_of_root[find(i)];
        ++sizes[bp.cluster_of[i]];
    }
    bp.boundaries.push_back(0);
    for (int s : sizes) bp.boundaries.push_back(bp.boundaries.back() + s);
    return bp;
}

ReorderedSchur reorder_schur(const SchurForm& S, const BlockPattern& pattern) {
    const int n = static_cast<int>(S.T.rows());
    if (static_cast<int>(pattern.cluster_of.size()) != n)
        throw Error(ErrorCode::DimensionError, "reorder_schur: pattern does not match T");
    ReorderedSchur out{S, pattern};
    CMatrix& T = out.schur.T;
    CMatrix& Q = out.schur.Q;
    std::vector<int>& key = out.pattern.cluster_of;
    const double tol = 100.0 * kEps * std::max(T.norm(), DBL_MIN);

    auto swap_adjacent = [&](int k) {
        const cplx a = T(k, k), b = T(k, k + 1), c = T(k + 1, k + 1);
        const cplx x0 = b, x1 = c - a;
        const double r = std::hypot(std::abs(x0), std::abs(x1));
        if (r == 0.0) {  // equal eigenvalues, already decoupled
            std::swap(key[k], key[k + 1]);
            return;
        }
        Eigen::Matrix2cd G;
        G << std::conj(x0) / r, std::conj(x1) / r, -x1 / r, x0 / r;
        T.middleRows(k, 2).rightCols(n - k) = G * T.middleRows(k, 2).rightCols(n - k);
        T.middleCols(k, 2).topRows(k + 2) = T.middleCols(k, 2).topRows(k + 2) * G.adjoint();
        Q.middleCols(k, 2) = Q.middleCols(k, 2) * G.adjoint();
        if (std::abs(T(k + 1, k)) > tol)
            throw Error(ErrorCode::SwapInstability, "reorder_schur: swap residual above tolerance");
        T(k + 1, k) = 0.0;
        T(k, k) = c;
        T(k + 1, k + 1) = a;
        std::swap(key[k], key[k + 1]);
    };

    // Stable selection: bring the next member of the lowest cluster down.
    for (int pos = 0; pos < n; ++pos) {
        int best = pos;
        for (int i = pos + 1; i < n; ++i)
            if (key[i] < key[best]) best = i;
        for (int k = best - 1; k >= pos; --k) swap_adjacent(k);
    }
    return out;
}

AtomicResult atomic_block_fun(const CMatrix& Tii, const DerivativeOracle& oracle, int max_order) {
    require_square(Tii, "atomic_block_fun");
    const int m = static_cast<int>(Tii.rows());
    AtomicResult res;
    if (m == 0) return res;

    const cplx d0 = Tii(0, 0);
    bool equal = true;
    for (int i = 1; i < m; ++i) equal = equal && Tii(i, i) == d0;
    const cplx sigma = equal ? d0 : Tii.trace() / static_cast<double>(m);

    int requested = (m == 1) ? 0 : std::min(max_order, std::max(2 * m, 8));
    std::vector<cplx> derivs = oracle(sigma, requested);
    res.max_order = requested;
    res.F = derivs.at(0) * CMatrix::Identity(m, m);
    res.terms = 1;
    if (m == 1) return res;

    CMatrix M = Tii.triangularView<Eigen::Upper>();
    M.diagonal().array() -= sigma;
    CMatrix P = CMatrix::Identity(m, m);
    int small_run = 0;
    for (int k = 1; k <= max_order; ++k) {
        P = (P.triangularView<Eigen::Upper>() * M).eval();
        if (P.isZero(0.0)) return res;  // nilpotent: the sum is exact
        if (k > requested) {
            requested = std::min(max_order, 2 * requested);
            derivs = oracle(sigma, requested);
            res.max_order = requested;
        }
        const CMatrix term = (derivs.at(k) * inv_factorial(k)) * P;
        if (!term.allFinite())
            throw Error(ErrorCode::SlowTaylorDecay, "atomic_block_fun: Taylor term overflowed");
        res.F += term;
        res.terms = k + 1;
        small_run = (term.norm() <= kEps * res.F.norm()) ? small_run + 1 : 0;
        if (small_run >= 2 && res.terms >= m) return res;
    }
    throw Error(ErrorCode::SlowTaylorDecay,
                "atomic_block_fun: Taylor series not converged by order " + std::to_string(max_order));
}

CMatrix sylvester_triangular(const CMatrix& Tii, const CMatrix& Tjj, const CMatrix& C,
                             double min_separation) {
    const Eigen::Index m = Tii.rows(), p = Tjj.rows();
    if (Tii.cols() != m || Tjj.cols() != p || C.rows() != m || C.cols() != p)
        throw Error(ErrorCode::DimensionError, "sylvester_triangular: shape mismatch");
    CMatrix F(m, p);
    for (Eigen::Index c = 0; c < p; ++c) {
        Eigen::VectorXcd rhs = C.col(c);
        for (Eigen::Index r = 0; r < c; ++r) rhs += Tjj(r, c) * F.col(r);
        const cplx shift = Tjj(c, c);
        for (Eigen::Index i = m - 1; i >= 0; --i) {
            cplx s = rhs(i);
            for (Eigen::Index l = i + 1; l < m; ++l) s -= Tii(i, l) * F(l, c);
            const cplx d = Tii(i, i) - shift;
            if (std::abs(d) <= min_separation || d == cplx{0.0, 0.0})
                throw Error(ErrorCode::NearSingularSeparation,
                            "sylvester_triangular: spectra of the blocks are not separated");
            F(i, c) = s / d;
        }
    }
    return F;
}

CMatrix funm_triangular(const CMatrix& T, const DerivativeOracle& oracle, const FunmOptions& opts,
                        FunmDiagnostics* diag) {
    require_square(T, "funm_triangular");
    const int n = static_cast<int>(T.rows());
    std::vector<cplx> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = T(i, i);
    const BlockPattern pattern = cluster_eigenvalues(eigs, opts.delta);
    SchurForm S{CMatrix::Identity(n, n), T.triangularView<Eigen::Upper>()};
    const ReorderedSchur R = reorder_schur(S, pattern);
    const CMatrix& Tr = R.schur.T;
    const std::vector<int>& b = R.pattern.boundaries;
    const int nb = R.pattern.clusters();

    auto blk = [&](auto& X, int i, int j) {
        return X.block(b[i], b[j], b[i + 1] - b[i], b[j + 1] - b[j]);
    };

    CMatrix F = CMatrix::Zero(n, n);
    for (int i = 0; i < nb; ++i) {
        const int m = b[i + 1] - b[i];
        const AtomicResult r = atomic_block_fun(blk(Tr, i, i), oracle, opts.max_order);
        blk(F, i, i) = r.F;
        merge(diag, r, m);
    }
    for (int d = 1; d < nb; ++d) {
        for (int i = 0; i + d < nb; ++i) {
            const int j = i + d;
            CMatrix C = blk(F, i, i) * blk(Tr, i, j) - blk(Tr, i, j) * blk(F, j, j);
            for (int k = i + 1; k < j; ++k)
                C += blk(F, i, k) * blk(Tr, k, j) - blk(Tr, i, k) * blk(F, k, j);
            blk(F, i, j) = sylvester_triangular(blk(Tr, i, i), blk(Tr, j, j), C, opts.delta);
        }
    }
    return R.schur.Q * F * R.schur.Q.adjoint();
}

CMatrix funm(const CMatrix& A, const DerivativeOracle& oracle, const FunmOptions& opts,
             FunmDiagnostics* diag) {
    require_square(A, "funm");
    if (!all_finite(A)) throw Error(ErrorCode::InvalidArgument, "funm: non-finite entry");
    const Eigen::Index n = A.rows();
    if (n == 0) return CMatrix(0, 0);

    CMatrix off = A;
    off.diagonal().setZero();
    if (off.isZero(0.0)) {
        if (diag) diag->diagonal_path = true;
        CMatrix F = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) F(i, i) = oracle(A(i, i), 0).at(0);
        return F;
    }

    if (opts.hermitian_fast_path &&
        (A - A.adjoint()).norm() <= static_cast<double>(n) * kEps * A.norm()) {
        if (diag) diag->hermitian_path = true;
        const CMatrix H = 0.5 * (A + A.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
        if (es.info() != Eigen::Success)
            throw Error(ErrorCode::NoConvergence, "funm: Hermitian eigensolver did not converge");
        Eigen::VectorXcd fl(n);
        for (Eigen::Index i = 0; i < n; ++i) fl(i) = oracle(es.eigenvalues()(i), 0).at(0);
        const CMatrix& V = es.eigenvectors();
        return V * fl.asDiagonal() * V.adjoint();
    }

    const SchurForm S = schur_decompose(A);
    return S.Q * funm_triangular(S.T, oracle, opts, diag) * S.Q.adjoint();
}

}  // namespace mlmat

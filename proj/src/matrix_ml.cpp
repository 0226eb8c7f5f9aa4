#include "mlmat/matrix_ml.hpp"

#include "mlmat/errors.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace mlmat {

namespace {

void check_request(const CMatrix& A, const MLParams& p, double tau) {
    validate(p);
    if (A.rows() == 0 || A.rows() != A.cols())
        throw Error(ErrorCode::DimensionError, "ml_matrix: matrix must be square with n >= 1");
    if (!(tau > kMachineEps)) throw Error(ErrorCode::InvalidArgument, "ml_matrix: tau <= eps");
}

void absorb(MatrixMLDiagnostics& d, const FunmDiagnostics& f) {
    d.max_derivative_order = std::max(d.max_derivative_order, f.max_derivative_order);
    d.max_taylor_terms = std::max(d.max_taylor_terms, f.max_taylor_terms);
    d.block_sizes = f.block_sizes;
    d.hermitian_path = f.hermitian_path;
    d.diagonal_path = f.diagonal_path;
}

void make_real(MatrixMLResult& r) {
    r.diag.real_input = true;
    r.diag.discarded_imag = r.value.imag().cwiseAbs().maxCoeff();
    r.value = r.value.real().cast<cplx>();
}

[[noreturn]] void rethrow_with_context(const Error& e, const MLParams& p, Eigen::Index n) {
    std::ostringstream os;
    os << "E_{" << p.alpha << "," << p.beta << "} of a " << n << "x" << n << " matrix: " << e.what();
    throw Error(e.code(), os.str());
}

}  // namespace

DerivativeOracle ml_derivative_oracle(const MLParams& p, double tau, MatrixMLDiagnostics* diag) {
    // The engine asks again with a larger order when the Taylor series
    // needs more terms; keep what was already computed for the last point.
    auto cache_point = std::make_shared<cplx>();
    auto cache = std::make_shared<std::vector<cplx>>();
    return [=](cplx sigma, int max_order) {
        if (*cache_point != sigma) {
            cache->clear();
            *cache_point = sigma;
        }
        for (int k = static_cast<int>(cache->size()); k <= max_order; ++k) {
            const DerivEval e = ml_derivative(sigma, k, p, tau);
            cache->push_back(e.value);
            if (diag) {
                diag->max_err_estimate = std::max(diag->max_err_estimate, e.err_estimate);
                diag->degraded = diag->degraded || e.degraded;
                diag->max_derivative_order = std::max(diag->max_derivative_order, k);
            }
        }
        return std::vector<cplx>(cache->begin(), cache->begin() + max_order + 1);
    };
}

MatrixMLResult ml_matrix(const MatrixMLRequest& req, const FunmOptions& opts) {
    check_request(req.A, req.params, req.tau);
    MatrixMLResult r;
    FunmOptions o = opts;
    o.delta = req.delta;
    FunmDiagnostics fd;
    try {
        r.value = funm(req.A, ml_derivative_oracle(req.params, req.tau, &r.diag), o, &fd);
    } catch (const Error& e) {
        rethrow_with_context(e, req.params, req.A.rows());
    }
    absorb(r.diag, fd);
    if (req.A.imag().isZero(0.0)) make_real(r);
    return r;
}

MatrixMLResult ml_matrix_scaled(const SchurForm& schur_of_A, bool real_input, double c,
                                const MLParams& p, double tau, const FunmOptions& opts) {
    check_request(schur_of_A.T, p, tau);
    MatrixMLResult r;
    FunmDiagnostics fd;
    try {
        const CMatrix F = funm_triangular(c * schur_of_A.T, ml_derivative_oracle(p, tau, &r.diag), opts, &fd);
        r.value = schur_of_A.Q * F * schur_of_A.Q.adjoint();
    } catch (const Error& e) {
        rethrow_with_context(e, p, schur_of_A.T.rows());
    }
    absorb(r.diag, fd);
    if (real_input) make_real(r);
    return r;
}

}  // namespace mlmat

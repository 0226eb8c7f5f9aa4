#pragma once

// Extended-precision reference values used only by the tests: the
// derivative power series summed term by term in MPFR arithmetic, the
// matrix power series of E_{a,b}(A), and a few closed forms.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace mlmat::oracle {

struct DecimalComplex {
    std::string re;
    std::string im;

    std::complex<double> to_complex() const;
};

/// k-th derivative of E_{alpha,beta}(z) by the power series in working
/// precision adapted to the largest term, rounded to `digits` significant
/// digits. Throws BudgetExceeded after 10^6 terms; requires |z| <= 50 and
/// digits >= 30.
DecimalComplex bigfloat_series(std::complex<double> z, int k, double alpha, double beta,
                               int digits = 50);

/// Same sum with the terms accumulated in reverse order (largest index
/// first); used to cross-check bigfloat_series.
DecimalComplex bigfloat_series_reversed(std::complex<double> z, int k, double alpha, double beta,
                                        int digits = 50);

/// E_{alpha,beta}(A) = sum_j A^j / Gamma(alpha j + beta) in MPFR arithmetic
/// with precision sized from the largest term bound, stopping when five
/// consecutive term norms fall below 1e-45 of the partial sum.
Eigen::MatrixXcd matrix_taylor(const Eigen::MatrixXcd& A, double alpha, double beta);

/// The same sum as decimal strings (row-major) with `digits` digits.
std::vector<DecimalComplex> matrix_taylor_decimal(const Eigen::MatrixXcd& A, double alpha,
                                                  double beta, int digits = 32);

/// e^{x^2} erfc(-x), which equals E_{1/2,1}(x) for real x.
std::string erfc_closed_form(double x, int digits = 40);

/// cosh(sqrt(z)) for real z >= 0 (cos(sqrt(-z)) for z < 0).
std::string cosh_sqrt(double z, int digits = 40);

}  // namespace mlmat::oracle

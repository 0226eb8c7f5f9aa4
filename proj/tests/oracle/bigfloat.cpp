#include "bigfloat.hpp"

#include "mlmat/errors.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mlmat::oracle {

namespace {

using big = boost::multiprecision::mpfr_float;

struct BigC {
    big re;
    big im;
};

BigC mul(const BigC& a, const BigC& b) {
    return {big(a.re * b.re - a.im * b.im), big(a.re * b.im + a.im * b.re)};
}

big abs2(const BigC& a) { return big(a.re * a.re + a.im * a.im); }

void set_digits(int digits) { big::default_precision(static_cast<unsigned>(digits)); }

big rgamma_big(const big& x) {
    if (x <= 0 && x == floor(x)) return big(0);
    return big(1 / boost::math::tgamma(x));
}

std::string to_decimal(const big& x, int digits) {
    if (x == 0) return "0";
    return x.str(digits, std::ios_base::scientific);
}

// log10 of |term j| of the k-th derivative series, in double precision, for
// sizing the working precision.
double log10_term(int j, int k, double logz, double alpha, double beta) {
    double r = (j - k) * logz;
    for (int i = 0; i < k; ++i) r += std::log10(static_cast<double>(j - i));
    const double g = alpha * j + beta;
    if (!(g <= 0.0 && g == std::floor(g))) r -= std::lgamma(g) / std::log(10.0);
    return r;
}

int working_digits(std::complex<double> z, int k, double alpha, double beta, int digits) {
    if (z == std::complex<double>{}) return digits + 20;
    const double logz = std::log10(std::abs(z));
    double peak = 0.0;
    double prev = -1e300;
    for (int j = k; j < 1000000; ++j) {
        const double t = log10_term(j, k, logz, alpha, beta);
        peak = std::max(peak, t);
        if (alpha * j + beta > 2.0 && t < prev && t < peak - digits - 40) break;
        prev = t;
    }
    return digits + 30 + static_cast<int>(std::ceil(peak));
}

std::vector<BigC> series_terms(std::complex<double> z, int k, double alpha, double beta, int digits) {
    if (std::abs(z) > 50.0)
        throw Error(ErrorCode::InvalidArgument, "bigfloat_series: |z| > 50");
    if (digits < 30) throw Error(ErrorCode::InvalidArgument, "bigfloat_series: digits < 30");
    set_digits(working_digits(z, k, alpha, beta, digits));

    const big a(alpha), b(beta);
    const BigC zb{big(z.real()), big(z.imag())};
    const big rel = pow(big(10), -(digits + 10));

    std::vector<BigC> terms;
    if (z == std::complex<double>{}) {
        big f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        terms.push_back({big(f * rgamma_big(big(a * k + b))), big(0)});
        return terms;
    }

    BigC zpow{big(1), big(0)};
    BigC sum{big(0), big(0)};
    big prev_mag = -1;
    for (int j = k; j < 1000000; ++j) {
        big ff = 1;
        for (int i = 0; i < k; ++i) ff *= (j - i);
        const big g = big(a * j + b);
        const big w = big(ff * rgamma_big(g));
        BigC t{big(w * zpow.re), big(w * zpow.im)};
        sum.re += t.re;
        sum.im += t.im;
        const big mag = abs2(t);
        terms.push_back(t);
        if (g > 2 && prev_mag >= 0 && mag <= prev_mag && mag < rel * rel * abs2(sum)) return terms;
        prev_mag = mag;
        zpow = mul(zpow, zb);
    }
    throw Error(ErrorCode::BudgetExceeded, "bigfloat_series: more than 10^6 terms");
}

}  // namespace

std::complex<double> DecimalComplex::to_complex() const {
    return {std::stod(re), std::stod(im)};
}

DecimalComplex bigfloat_series(std::complex<double> z, int k, double alpha, double beta, int digits) {
    const auto terms = series_terms(z, k, alpha, beta, digits);
    BigC s{big(0), big(0)};
    for (const auto& t : terms) {
        s.re += t.re;
        s.im += t.im;
    }
    return {to_decimal(s.re, digits), to_decimal(s.im, digits)};
}

DecimalComplex bigfloat_series_reversed(std::complex<double> z, int k, double alpha, double beta,
                                        int digits) {
    const auto terms = series_terms(z, k, alpha, beta, digits);
    BigC s{big(0), big(0)};
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        s.re += it->re;
        s.im += it->im;
    }
    return {to_decimal(s.re, digits), to_decimal(s.im, digits)};
}

namespace {

struct BigMatrix {
    int n = 0;
    std::vector<big> re, im;  // row-major
};

BigMatrix taylor_big(const Eigen::MatrixXcd& A, double alpha, double beta) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw Error(ErrorCode::DimensionError, "matrix_taylor: matrix not square");

    // Size the precision from the Frobenius-norm bound on the terms.
    const double nrm = A.norm();
    double peak = 0.0;
    if (nrm > 0.0) {
        const double ln = std::log10(nrm);
        for (int j = 0; j < 100000; ++j) {
            const double g = alpha * j + beta;
            double t = j * ln;
            if (!(g <= 0.0 && g == std::floor(g))) t -= std::lgamma(g) / std::log(10.0);
            peak = std::max(peak, t);
            if (g > 2.0 && t < peak - 100) break;
        }
    }
    set_digits(70 + static_cast<int>(std::ceil(peak)));

    const bool real = A.imag().cwiseAbs().maxCoeff() == 0.0;
    std::vector<big> ar(n * n), ai(n * n), pr(n * n), pi(n * n), sr(n * n), si(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ar[i * n + j] = A(i, j).real();
            ai[i * n + j] = A(i, j).imag();
            pr[i * n + j] = (i == j) ? 1 : 0;
            pi[i * n + j] = 0;
            sr[i * n + j] = 0;
            si[i * n + j] = 0;
        }

    const big a(alpha), b(beta);
    const big rel2 = pow(big(10), -90);
    int small_run = 0;
    std::vector<big> qr(n * n), qi(n * n);
    for (int j = 0;; ++j) {
        if (j == 200000) throw Error(ErrorCode::BudgetExceeded, "matrix_taylor: no convergence");
        const big g = big(a * j + b);
        const big w = rgamma_big(g);
        big tn = 0, sn = 0;
        for (int e = 0; e < n * n; ++e) {
            const big tr = big(w * pr[e]);
            const big ti = big(w * pi[e]);
            sr[e] += tr;
            si[e] += ti;
            tn += tr * tr + ti * ti;
            sn += sr[e] * sr[e] + si[e] * si[e];
        }
        if (g > 2 && tn <= rel2 * sn) {
            if (++small_run >= 5) break;
        } else {
            small_run = 0;
        }
        // P <- P * A
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                big accr = 0, acci = 0;
                for (int m = 0; m < n; ++m) {
                    const big& xr = pr[r * n + m];
                    const big& yr = ar[m * n + c];
                    if (real) {
                        accr += xr * yr;
                    } else {
                        const big& xi = pi[r * n + m];
                        const big& yi = ai[m * n + c];
                        accr += xr * yr - xi * yi;
                        acci += xr * yi + xi * yr;
                    }
                }
                qr[r * n + c] = accr;
                qi[r * n + c] = acci;
            }
        std::swap(pr, qr);
        std::swap(pi, qi);
    }
    return {n, std::move(sr), std::move(si)};
}

}  // namespace

Eigen::MatrixXcd matrix_taylor(const Eigen::MatrixXcd& A, double alpha, double beta) {
    const BigMatrix S = taylor_big(A, alpha, beta);
    Eigen::MatrixXcd out(S.n, S.n);
    for (int i = 0; i < S.n; ++i)
        for (int j = 0; j < S.n; ++j)
            out(i, j) = {S.re[i * S.n + j].convert_to<double>(), S.im[i * S.n + j].convert_to<double>()};
    return out;
}

std::vector<DecimalComplex> matrix_taylor_decimal(const Eigen::MatrixXcd& A, double alpha, double beta,
                                                  int digits) {
    const BigMatrix S = taylor_big(A, alpha, beta);
    std::vector<DecimalComplex> out;
    out.reserve(S.re.size());
    for (size_t e = 0; e < S.re.size(); ++e)
        out.push_back({to_decimal(S.re[e], digits), to_decimal(S.im[e], digits)});
    return out;
}

std::string erfc_closed_form(double x, int digits) {
    set_digits(digits + 30);
    const big xb(x);
    const big v = big(exp(xb * xb) * boost::multiprecision::erfc(big(-xb)));
    return to_decimal(v, digits);
}

std::string cosh_sqrt(double z, int digits) {
    set_digits(digits + 30);
    const big zb(z);
    const big v = z >= 0 ? big(cosh(sqrt(zb))) : big(cos(sqrt(big(-zb))));
    return to_decimal(v, digits);
}

}  // namespace mlmat::oracle

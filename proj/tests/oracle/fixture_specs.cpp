#include "fixture_specs.hpp"

#include "test_support.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace mlmat::oracle {

using nlohmann::ordered_json;

std::string exact_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<ScalarCase> scalar_cases() {
    std::vector<ScalarCase> out;
    const double pi = std::numbers::pi;
    auto ray = [&](const std::string& g, double theta, double a, double b) {
        for (int i = 1; i <= 40; ++i) {
            const double r = 0.25 * i;
            const std::complex<double> z = std::polar(r, theta);
            for (int k = 1; k <= 6; ++k) out.push_back({g, z, k, a, b});
        }
    };
    ray("ray_0.8pi", 0.8 * pi, 0.6, 0.6);
    ray("ray_0.5pi", 0.5 * pi, 0.8, 1.2);
    for (int i = 0; i <= 40; ++i) {
        const double r = 0.05 * i;
        out.push_back({"balancing", r == 0.0 ? std::complex<double>{} : std::polar(r, 0.5 * pi), 5, 0.6, 1.0});
    }
    out.push_back({"examples", {-3.0, 0.0}, 2, 0.6, 1.0});
    out.push_back({"examples", {2.0, 2.0}, 1, 0.8, 1.2});
    out.push_back({"examples", {-1.5, 0.0}, 4, 0.8, 1.2});
    out.push_back({"examples", {-2.35, 1.71}, 4, 0.6, 0.6});
    out.push_back({"examples", {-7.0, 3.0}, 3, 0.6, 1.0});
    out.push_back({"examples", {-2.0, 0.0}, 1, 0.6, 1.0});
    return out;
}

std::vector<MatrixCase> matrix_cases() {
    std::vector<MatrixCase> out;
    for (int n : {4, 8, 12, 16, 20})
        for (double a : {0.5, 0.8, 1.2})
            out.push_back({"neg_redheffer_" + std::to_string(n), testing::neg_redheffer(n), a, 1.0});
    for (double a : {0.6, 0.9}) out.push_back({"clustered40", testing::clustered_matrix40(), a, 1.0});

    Eigen::MatrixXcd T(2, 2);
    T << 1.0, 1.0, 0.0, 1.0001;
    out.push_back({"near_jordan2", T, 0.6, 1.0});

    // companion of (x-1)^2 (x+2)^2 = x^4 + 2x^3 - 3x^2 - 4x + 4
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 3; ++i) C(i, i + 1) = 1.0;
    C(3, 0) = -4.0;
    C(3, 1) = 4.0;
    C(3, 2) = 3.0;
    C(3, 3) = -2.0;
    out.push_back({"companion4", C, 1.0, 1.0});
    return out;
}

ordered_json scalar_record(const ScalarCase& c) {
    const DecimalComplex v = bigfloat_series(c.z, c.k, c.alpha, c.beta, kScalarDigits);
    ordered_json r;
    r["group"] = c.group;
    r["z_re"] = exact_double(c.z.real());
    r["z_im"] = exact_double(c.z.imag());
    r["k"] = c.k;
    r["alpha"] = exact_double(c.alpha);
    r["beta"] = exact_double(c.beta);
    r["re"] = v.re;
    r["im"] = v.im;
    return r;
}

ordered_json matrix_record(const MatrixCase& c) {
    const int n = static_cast<int>(c.A.rows());
    ordered_json r;
    r["name"] = c.name;
    r["n"] = n;
    r["alpha"] = exact_double(c.alpha);
    r["beta"] = exact_double(c.beta);
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < n; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < n; ++j) row.push_back(exact_double(c.A(i, j).real()));
        rows.push_back(row);
    }
    r["A"] = rows;
    const auto vals = matrix_taylor_decimal(c.A, c.alpha, c.beta, kMatrixDigits);
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (const auto& v : vals) {
        re.push_back(v.re);
        im.push_back(v.im);
    }
    r["re"] = re;
    r["im"] = im;
    return r;
}

}  // namespace mlmat::oracle

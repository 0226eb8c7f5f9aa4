#include "bigfloat.hpp"
#include "test_support.hpp"

#include "mlmat/errors.hpp"
#include "mlmat/fde.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mlmat;

namespace {

RVector vec(std::initializer_list<double> v) {
    RVector r(v.size());
    int i = 0;
    for (double x : v) r(i++) = x;
    return r;
}

RMatrix expm(const RMatrix& A) { return oracle::matrix_taylor(A.cast<cplx>(), 1.0, 1.0).real(); }

double closed_erfc(double x) { return std::stod(oracle::erfc_closed_form(x)); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

RMatrix random_stable(int n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    RMatrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = 0.4 * g(rng);
    A.diagonal().array() -= 1.5;
    return A;
}

}  // namespace

TEST_SUITE("linear systems") {
    TEST_CASE("homogeneous examples") {
        LinearFdeSystem s1{RMatrix::Constant(1, 1, -0.7), 1.0, {vec({2.0})}};
        for (double t : {0.3, 1.0, 2.5}) CHECK(std::abs(solve_linear_fde(s1, t)(0) - 2.0 * std::exp(-0.7 * t)) < 1e-14);
        LinearFdeSystem s2{RMatrix::Zero(2, 2), 1.5, {vec({1.0, -2.0}), vec({0.5, 3.0})}};
        const RVector y = solve_linear_fde(s2, 2.0);
        CHECK((y - vec({2.0, 4.0})).norm() < 1e-14);
        RMatrix D = RMatrix::Zero(2, 2);
        D(0, 0) = -1.0;
        D(1, 1) = -2.0;
        LinearFdeSystem s3{D, 0.5, {vec({3.0, -1.0})}};
        const RVector z = solve_linear_fde(s3, 1.0);
        CHECK(std::abs(z(0) - 3.0 * closed_erfc(-1.0)) < 1e-14);
        CHECK(std::abs(z(1) + closed_erfc(-2.0)) < 1e-14);
        CHECK((solve_linear_fde(s3, 0.0) - vec({3.0, -1.0})).norm() == 0.0);
    }
    TEST_CASE("approach to the initial value") {
        std::mt19937 rng(71);
        LinearFdeSystem s{random_stable(3, rng), 0.6, {vec({1.0, 2.0, -1.0})}};
        double prev = 0.0;
        for (int e = 2; e <= 8; e += 2) {
            const double t = std::pow(10.0, -e);
            const double err = (solve_linear_fde(s, t) - s.Y0[0]).norm();
            if (prev > 0.0) CHECK(std::log10(prev / err) / 2.0 == doctest::Approx(0.6).epsilon(0.05));
            prev = err;
        }
    }
    TEST_CASE("classical limit") {
        std::mt19937 rng(72);
        for (int trial = 0; trial < 4; ++trial) {
            RMatrix A = random_stable(3, rng);
            A *= 2.0 / A.cwiseAbs().colwise().sum().maxCoeff();
            const RVector y0 = vec({1.0, -0.5, 0.25}), b = vec({0.3, 0.0, -1.0});
            LinearFdeSystem s{A, 1.0, {y0}};
            for (double t : {0.5, 2.0}) {
                const RMatrix E = expm(t * A);
                CHECK((solve_linear_fde(s, t) - E * y0).norm() <= 1e-12 * (E * y0).norm());
                // constant forcing: e^{tA} y0 + A^{-1} (e^{tA} - I) b
                const RVector ref = E * y0 + A.lu().solve((E - RMatrix::Identity(3, 3)) * b);
                CHECK((solve_poly_source(s, {{1.0}, b}, t) - ref).norm() <= 1e-12 * ref.norm());
            }
        }
    }
}

TEST_SUITE("companion form") {
    TEST_CASE("dimensions and rows") {
        const auto cs = companion_from_multiterm({{2, 6, 7, 4, 1}, {4, 5}, {}, {}});
        CHECK(cs.system.A.rows() == 16);
        CHECK(cs.system.alpha == doctest::Approx(0.2));
        const auto c1 = companion_from_multiterm({{3.0, 2.0}, {1, 2}, {1.0}, {}});
        REQUIRE(c1.system.A.rows() == 1);
        CHECK(c1.system.A(0, 0) == doctest::Approx(-1.5));
        const auto c2 = companion_from_multiterm({{1.0, 0.0, 1.0}, {1, 2}, {1.0}, {}});
        REQUIRE(c2.system.A.rows() == 2);
        CHECK(c2.system.A(0, 1) == 1.0);
        CHECK(c2.system.A(1, 0) == -1.0);
        CHECK(c2.system.A(1, 1) == 0.0);
        CHECK(code_of([] { companion_from_multiterm({{1.0, 1.0}, {3, 2}, {}, {}}); }) == ErrorCode::IrrationalOrder);
    }
    TEST_CASE("two half steps reproduce the classical decay") {
        const auto cs = companion_from_multiterm({{1.0, 0.0, 1.0}, {1, 2}, {1.0}, {}});
        for (double t : {0.5, 1.0, 2.0})
            CHECK(std::abs(solve_linear_fde(cs.system, t)(cs.readout) - std::exp(-t)) <= 1e-12);
    }
    TEST_CASE("single-term round trip") {
        for (auto [p, q] : {std::pair{1L, 2L}, std::pair{2L, 3L}, std::pair{3L, 4L}}) {
            const MultitermFde mt{{1.5, 2.0}, {p, q}, {0.8}, {1.0, -0.5}};
            const auto cs = companion_from_multiterm(mt);
            const double a = double(p) / q;
            LinearFdeSystem direct{RMatrix::Constant(1, 1, -0.75), a, {vec({0.8})}};
            for (double t : {0.4, 1.3}) {
                const double yc = solve_poly_source(cs.system, {mt.f, cs.e_N}, t)(cs.readout);
                const double yd = solve_poly_source(direct, {mt.f, vec({0.5})}, t)(0);
                CHECK(std::abs(yc - yd) <= 1e-12 * (1 + std::abs(yd)));
            }
        }
    }
}

TEST_SUITE("forcing") {
    TEST_CASE("polynomial examples") {
        std::mt19937 rng(73);
        LinearFdeSystem s{random_stable(2, rng), 0.7, {vec({1.0, 2.0})}};
        CHECK((solve_poly_source(s, {{0.0}, vec({1.0, 1.0})}, 1.2) - solve_linear_fde(s, 1.2)).norm() < 1e-15);
        LinearFdeSystem z{RMatrix::Zero(1, 1), 1.0, {vec({0.0})}};
        CHECK(std::abs(solve_poly_source(z, {{1.0}, vec({1.0})}, 1.7)(0) - 1.7) < 1e-15);
    }
    TEST_CASE("sampled forcing matches the closed form") {
        std::mt19937 rng(74);
        LinearFdeSystem s{random_stable(3, rng), 0.6, {vec({1.0, 0.0, -1.0})}};
        const RVector b = vec({1.0, -2.0, 0.5});
        const std::vector<double> c{0.5, 2.0, -0.5};
        auto F = [&](double t) -> RVector { return (c[0] + c[1] * t + c[2] * t * t) * b; };
        for (double t : {0.5, 2.0}) {
            const RVector ref = solve_poly_source(s, {c, b}, t);
            CHECK((solve_sampled_source(s, F, t, 64) - ref).norm() <= 1e-10 * (1 + ref.norm()));
        }
        auto zero = [](double) -> RVector { return RVector::Zero(3); };
        CHECK((solve_sampled_source(s, zero, 1.0, 8) - solve_linear_fde(s, 1.0)).norm() < 1e-15);
        CHECK(code_of([&] { solve_sampled_source(s, zero, 1.0, 1); }) == ErrorCode::NodeBudget);
    }
    TEST_CASE("sine forcing in the classical case") {
        LinearFdeSystem s{RMatrix::Constant(1, 1, -1.0), 1.0, {vec({0.0})}};
        auto F = [](double t) -> RVector { return RVector::Constant(1, std::sin(t)); };
        for (double t : {1.0, 3.0}) {
            const double ref = 0.5 * (std::sin(t) - std::cos(t) + std::exp(-t));
            double prev = 0.0;
            for (int nodes : {16, 32, 64}) {
                const double err = std::abs(solve_sampled_source(s, F, t, nodes)(0) - ref);
                if (prev > 0.0) CHECK(prev / err > 6.0);  // at least third order
                prev = err;
            }
            CHECK(prev < 1e-7);
        }
    }
}

TEST_SUITE("product integration") {
    TEST_CASE("constant solution") {
        const auto tr = trapezoidal_pi({{0.0, 1.0}, {1, 2}, {1.0}, {}}, 0.1, 2.0);
        for (double y : tr.y) CHECK(y == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(tr.t.size() == 21);
    }
    TEST_CASE("classical decay") {
        const auto tr = trapezoidal_pi({{1.0, 1.0}, {1, 1}, {1.0}, {}}, 1e-3, 1.0);
        CHECK(std::abs(tr.y.back() - std::exp(-1.0)) < 1e-5);
    }
    TEST_CASE("second order against the closed form") {
        const MultitermFde mt{{2, 6, 7, 4, 1}, {4, 5}, {}, {0.0, 2.0, -0.5}};
        const auto cs = companion_from_multiterm(mt);
        const std::vector<double> ts{1.0, 2.0, 3.0};
        const auto ref = solve_poly_source(cs.system, {mt.f, cs.e_N}, ts);
        std::vector<double> errs;
        for (int e : {6, 7, 8}) {
            const double h = std::ldexp(1.0, -e);
            const auto tr = trapezoidal_pi(mt, h, 3.0);
            double err = 0.0;
            for (size_t i = 0; i < ts.size(); ++i)
                err = std::max(err, std::abs(tr.y[std::lround(ts[i] / h)] - ref[i](cs.readout)));
            errs.push_back(err);
        }
        for (size_t i = 1; i < errs.size(); ++i) CHECK(std::log2(errs[i - 1] / errs[i]) >= 1.8);
    }
}

TEST_SUITE("gramians") {
    TEST_CASE("classical examples") {
        const auto g0 = gramian(GramianKind::Controllability, RMatrix::Zero(1, 1), RMatrix::Ones(1, 1), 1.0, 2.5);
        CHECK(g0.G(0, 0) == doctest::Approx(2.5).epsilon(1e-14));
        const auto g1 = gramian(GramianKind::Controllability, RMatrix::Constant(1, 1, -1.0), RMatrix::Ones(1, 1), 1.0, 1.0);
        CHECK(g1.G(0, 0) == doctest::Approx(0.43233235838169365).epsilon(1e-14));
        CHECK(g1.positive_definite);
    }
    TEST_CASE("half order against adaptive quadrature") {
        // E_{1/2,1/2}(x) = 1/sqrt(pi) + x e^{x^2} erfc(-x); integrate in v = sqrt(u)
        auto E = [](double x) { return 1.0 / std::sqrt(std::numbers::pi) + x * std::exp(x * x) * std::erfc(-x); };
        auto integrand = [&](double v) { return 2.0 * v * E(-v) * E(-v); };
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-15);
        const auto g = gramian(GramianKind::Controllability, RMatrix::Constant(1, 1, -1.0), RMatrix::Ones(1, 1), 0.5, 1.0);
        CHECK(std::abs(g.G(0, 0) - ref) <= 1e-12);
        CHECK(g.richardson_delta < 1e-12);
    }
    TEST_CASE("symmetry, semidefiniteness and duality") {
        std::mt19937 rng(75);
        std::normal_distribution<double> gd;
        for (int trial = 0; trial < 4; ++trial) {
            const RMatrix A = random_stable(3, rng);
            RMatrix B(3, 1 + trial % 2);
            for (int i = 0; i < B.size(); ++i) B.data()[i] = gd(rng);
            const double alpha = 0.5 + 0.15 * trial;
            const auto c = gramian(GramianKind::Controllability, A, B, alpha, 1.5, 32);
            CHECK((c.G - c.G.transpose()).norm() == 0.0);
            CHECK(c.positive_semidefinite);
            CHECK(c.min_eigenvalue >= -1e-10 * c.G.norm());
            const auto o = gramian(GramianKind::Observability, A.transpose(), B.transpose(), alpha, 1.5, 32);
            CHECK((o.G - c.G).norm() <= 1e-13 * c.G.norm());
        }
        // rank-one input into a diagonal system with a zero row: singular
        RMatrix D = RMatrix::Zero(2, 2);
        D(0, 0) = -1.0;
        D(1, 1) = -2.0;
        const auto s = gramian(GramianKind::Controllability, D, vec({1.0, 0.0}), 0.7, 1.0, 16);
        CHECK(s.positive_semidefinite);
        CHECK_FALSE(s.positive_definite);
    }
    TEST_CASE("Jacobi rule integrates monomials") {
        std::vector<double> x, w;
        gauss_jacobi01(8, -0.4, x, w);
        for (int m = 0; m < 16; ++m) {
            double s = 0.0;
            for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], m);
            CHECK(s == doctest::Approx(1.0 / (m + 0.6)).epsilon(1e-13));
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "polcav/errors.hpp"
#include "polcav/least_squares.hpp"

using namespace polcav;

TEST_CASE("cholesky solver on a known SPD system") {
    // A = [4 2; 2 3], b = [10 8] -> x = [1.75 1.5]
    std::vector<double> a = {4, 2, 2, 3};
    std::vector<double> x;
    REQUIRE(lsq::cholesky_solve(a, {10, 8}, 2, x));
    CHECK(x[0] == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.5).epsilon(1e-14));

    SUBCASE("refuses indefinite matrices") {
        std::vector<double> bad = {1, 2, 2, 1};
        CHECK_FALSE(lsq::cholesky_solve(bad, {1, 1}, 2, x));
    }
    SUBCASE("inverse agrees") {
        std::vector<double> inv;
        REQUIRE(lsq::spd_inverse(a, 2, inv));
        // A^{-1} = 1/8 [3 -2; -2 4]
        CHECK(inv[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
        CHECK(inv[1] == doctest::Approx(-2.0 / 8.0).epsilon(1e-14));
        CHECK(inv[3] == doctest::Approx(4.0 / 8.0).epsilon(1e-14));
    }
}

TEST_CASE("line fit reproduces the closed-form regression") {
    const std::vector<double> xs = {0, 1, 2, 3, 4, 5};
    const std::vector<double> ys = {1.1, 2.9, 5.2, 6.8, 9.1, 10.9};

    const lsq::ResidualFn residual = [&](const std::vector<double>& p) {
        std::vector<double> r(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) r[i] = p[0] + p[1] * xs[i] - ys[i];
        return r;
    };
    const lsq::JacobianFn jacobian = [&](const std::vector<double>&) {
        std::vector<double> j(xs.size() * 2);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            j[i * 2] = 1.0;
            j[i * 2 + 1] = xs[i];
        }
        return j;
    };

    const lsq::Result res = lsq::fit(residual, jacobian, {0.0, 0.0});
    // Closed-form least squares.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    CHECK(res.params[0] == doctest::Approx(intercept).epsilon(1e-10));
    CHECK(res.params[1] == doctest::Approx(slope).epsilon(1e-10));
    CHECK(res.covariance_ok);
    CHECK(res.std_errors[1] > 0.0);
}

TEST_CASE("nonlinear exponential recovery from a rough start") {
    const double a_true = 2.5, k_true = 0.7;
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(0.1 * i);
        ys.push_back(a_true * std::exp(-k_true * 0.1 * i));
    }
    const lsq::ResidualFn residual = [&](const std::vector<double>& p) {
        std::vector<double> r(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            r[i] = p[0] * std::exp(-p[1] * xs[i]) - ys[i];
        return r;
    };
    const lsq::JacobianFn jacobian = [&](const std::vector<double>& p) {
        std::vector<double> j(xs.size() * 2);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = std::exp(-p[1] * xs[i]);
            j[i * 2] = e;
            j[i * 2 + 1] = -p[0] * xs[i] * e;
        }
        return j;
    };
    const lsq::Result res = lsq::fit(residual, jacobian, {1.0, 0.2});
    CHECK(res.params[0] == doctest::Approx(a_true).epsilon(1e-8));
    CHECK(res.params[1] == doctest::Approx(k_true).epsilon(1e-8));
    CHECK(res.converged);
}

TEST_CASE("validator gates every step") {
    const lsq::ResidualFn residual = [](const std::vector<double>& p) {
        return std::vector<double>{p[0] - 3.0};
    };
    const lsq::JacobianFn jacobian = [](const std::vector<double>&) {
        return std::vector<double>{1.0};
    };
    const lsq::ValidatorFn reject_all = [](const std::vector<double>&) { return false; };
    const lsq::Result res = lsq::fit(residual, jacobian, {1.0}, {}, reject_all);
    CHECK(res.params[0] == 1.0);  // never moved
    CHECK_FALSE(res.converged);
}

TEST_CASE("non-finite initial residual raises NoConvergence") {
    const lsq::ResidualFn residual = [](const std::vector<double>& p) {
        return std::vector<double>{std::log(p[0])};
    };
    const lsq::JacobianFn jacobian = [](const std::vector<double>& p) {
        return std::vector<double>{1.0 / p[0]};
    };
    CHECK_THROWS_AS(lsq::fit(residual, jacobian, {-1.0}), NoConvergence);
}

TEST_CASE("covariance flagged singular for an unconstrained direction") {
    // Two parameters entering only as their sum.
    const lsq::ResidualFn residual = [](const std::vector<double>& p) {
        return std::vector<double>{p[0] + p[1] - 2.0, 2.0 * (p[0] + p[1]) - 4.0};
    };
    const lsq::JacobianFn jacobian = [](const std::vector<double>&) {
        return std::vector<double>{1.0, 1.0, 2.0, 2.0};
    };
    const lsq::Result res = lsq::fit(residual, jacobian, {0.5, 0.5});
    CHECK_FALSE(res.covariance_ok);
}

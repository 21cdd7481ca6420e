#include <doctest.h>

#include <cmath>
#include <random>

#include "slcr/error.hpp"
#include "slcr/explicit.hpp"

using namespace slcr;

TEST_CASE("affine pair") {
    auto p = affine_pair(2.0, -1.0, 0.5);
    auto [u, v] = p.eval(1.0, 1.5);
    CHECK(u == 1.0);
    CHECK(v == 3.5);
    auto q = affine_pair(1.0, 1.0, 0.0);
    CHECK(q.eval(1.0, 3.0) == std::pair{2.0, 3.0});
    for (double a : {0.0, 0.3, 2.0}) {
        auto [r1, r2] = analytic_cr_residual(p, a, 0.7, -0.2);
        CHECK(r1 == 0.0);
        CHECK(r2 == 0.0);
    }
}

TEST_CASE("catenoid values") {
    auto p = catenoid_pair();
    auto [u0, v0] = p.eval(0.0, 0.0);
    CHECK(u0 == 0.0);
    CHECK(v0 == doctest::Approx(-0.5));
    auto [u1, v1] = p.eval(1.0, 2.0);
    CHECK(u1 == doctest::Approx(2 * std::tanh(1.0)));
    CHECK(v1 == doctest::Approx(2 / std::pow(std::cosh(1.0), 2) - 0.5 * std::pow(std::cosh(1.0), 2)));
}

TEST_CASE("paraboloid union") {
    auto p = paraboloid_union_pair();
    auto [u, v] = p.eval(0.0, 1.0);
    CHECK(u == doctest::Approx(0.5));
    CHECK(v == 0.0);
    CHECK_THROWS_WITH_AS(p.derivs(0.3, 0.0), doctest::Contains("undefined-derivative"), Error);
}

TEST_CASE("closed-form families satisfy the system at a = 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        double x = U(rng), y = U(rng);
        if (std::abs(y) < 1e-6) continue;
        for (const auto& p : {catenoid_pair(), paraboloid_union_pair()}) {
            auto [u, v] = p.eval(x, y);
            auto [r1, r2] = analytic_cr_residual(p, 0.0, x, y);
            double scale = 1 + std::abs(u) + std::abs(v) + std::cosh(2 * x);
            CHECK(std::abs(r1) <= 1e-12 * scale);
            CHECK(std::abs(r2) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("Harvey-Lawson root solves the cubic") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (double a : {0.0, 0.25, 1.0}) {
        for (int k = 0; k < 200; ++k) {
            double x = U(rng), y = U(rng);
            double t = harvey_lawson_alpha(a, x, y);
            CHECK(t >= 0);
            double scale = 1 + std::pow(x, 4) + y * y + std::pow(t, 3);
            CHECK(std::abs(harvey_lawson_cubic(a, x, y, t)) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("Harvey-Lawson pair satisfies the system") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (double a : {0.25, 1.0}) {
        auto p = harvey_lawson_pair(a);
        for (int k = 0; k < 200; ++k) {
            double x = U(rng), y = U(rng);
            auto [r1, r2] = analytic_cr_residual(p, a, x, y);
            CHECK(std::abs(r1) <= 1e-9);
            CHECK(std::abs(r2) <= 1e-9);
        }
    }
}

TEST_CASE("Harvey-Lawson sign pattern and axes") {
    for (double a : {0.0, 0.5}) {
        auto [u, v] = harvey_lawson_eval(a, 0.7, 0.4);
        auto [um, vm] = harvey_lawson_eval(a, -0.7, 0.4);
        auto [un, vn] = harvey_lawson_eval(a, 0.7, -0.4);
        CHECK(um == doctest::Approx(u));
        CHECK(vm == doctest::Approx(-v));
        CHECK(un == doctest::Approx(-u));
        CHECK(vn == doctest::Approx(v));
        CHECK(harvey_lawson_eval(a, 0.7, 0.0).first == 0.0);
    }
}

TEST_CASE("Harvey-Lawson potential has the pair as gradient") {
    const double a = 0.5, h = 1e-4;
    for (auto [x, y] : {std::pair{0.3, 0.4}, {-0.8, 0.2}, {1.1, -0.6}}) {
        double fx = (harvey_lawson_potential(a, x + h, y) - harvey_lawson_potential(a, x - h, y)) / (2 * h);
        double fy = (harvey_lawson_potential(a, x, y + h) - harvey_lawson_potential(a, x, y - h)) / (2 * h);
        auto [u, v] = harvey_lawson_eval(a, x, y);
        CHECK(fx == doctest::Approx(v).epsilon(1e-6));
        CHECK(fy == doctest::Approx(u).epsilon(1e-6));
    }
    CHECK(harvey_lawson_potential(a, 0.0, 0.0) == 0.0);
}

TEST_CASE("weighted homogeneity of the a = 0 family") {
    std::vector<std::array<double, 3>> s{{0.3, 0.4, 2.0}, {-1.0, 0.5, 0.5}, {0.8, -1.2, 1.7}};
    CHECK(weighted_homogeneity_check(s) <= 1e-10);
}

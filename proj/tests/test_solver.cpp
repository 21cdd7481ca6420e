#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slcr/error.hpp"
#include "slcr/phi.hpp"
#include "slcr/solver.hpp"

using namespace slcr;

TEST_CASE("A and B coefficients") {
    CHECK(A_coefficient(0, 1, 1) == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-14));
    CHECK(A_coefficient(0.3, 0, 0.5) == 0.0);
    CHECK(A_coefficient(0.3, -0.7, 0.5) == doctest::Approx(-A_coefficient(0.3, 0.7, 0.5)));
    // B' = A
    const double h = 1e-5;
    double dB = (B_coefficient(0.2, 0.9 + h, 0.4) - B_coefficient(0.2, 0.9 - h, 0.4)) / (2 * h);
    CHECK(dB == doctest::Approx(A_coefficient(0.2, 0.9, 0.4)).epsilon(1e-8));
}

TEST_CASE("affine data is reproduced exactly") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto phi = make_phi(g, "affine:1.5,0.5,-0.25", PhiTarget::f, 1.0);
    auto [f, rep] = solve_dirichlet_f(g, phi, 1.0);
    REQUIRE(rep.converged);
    for (std::size_t n = 0; n < g->size(); ++n) {
        double x = g->node(n).x, y = g->node(n).y;
        CHECK(f[n] == doctest::Approx(1.5 * x * y + 0.5 * y - 0.25 * x).scale(1).epsilon(1e-9));
    }
}

TEST_CASE("energy gradient matches the flux residual") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y) + x * y; });
    auto grad = functional_gradient(f, 0.6);
    auto P = residual_P(f, 0.6);
    for (std::size_t n : g->interior()) CHECK(grad[n] == doctest::Approx(-g->cell_area() * P[n]).scale(1e-12));
    // Directional finite difference of I.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N;
    ScalarField d = ScalarField::zeros(g);
    for (std::size_t n : g->interior()) d[n] = N(rng);
    const double eps = 1e-5;
    ScalarField fp = f, fm = f;
    double dot = 0;
    for (std::size_t n = 0; n < g->size(); ++n) {
        fp[n] += eps * d[n];
        fm[n] -= eps * d[n];
        dot += grad[n] * d[n];
    }
    double fd = (functional_I(fp, 0.6) - functional_I(fm, 0.6)) / (2 * eps);
    CHECK(fd == doctest::Approx(dot).epsilon(1e-5));
}

TEST_CASE("Harvey-Lawson v converges at second order") {
    const double a = 1.0;
    std::vector<double> err;
    for (int nx : {33, 65}) {
        auto g = build_grid(Disc{0, 0, 1}, nx, nx);
        auto phi = make_phi(g, "hl", PhiTarget::v, a);
        auto [p, rep] = solve_dirichlet_v(g, phi, a, center_node(*g));
        REQUIRE(rep.converged);
        CHECK(rep.iterations <= 12);
        CHECK(rep.ellipticity_min > 0);
        CHECK(p.verified);
        double e = 0;
        for (std::size_t n = 0; n < g->size(); ++n)
            e = std::max(e, std::abs(p.v[n] - harvey_lawson_eval(a, g->node(n).x, g->node(n).y).second));
        err.push_back(e);
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
}

TEST_CASE("maximum principle and comparison for random data") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 3; ++t) {
        auto phi = random_smooth_phi(g, rng);
        auto [f, rep] = solve_dirichlet_f(g, phi, 0.8);
        REQUIRE(rep.converged);
        double lo = *std::min_element(phi.samples.begin(), phi.samples.end());
        double hi = *std::max_element(phi.samples.begin(), phi.samples.end());
        for (double x : f.values) {
            CHECK(x >= lo);
            CHECK(x <= hi);
        }
        BoundaryFunction up = phi;
        for (double& s : up.samples) s += 0.1;
        auto [f2, rep2] = solve_dirichlet_f(g, up, 0.8);
        REQUIRE(rep2.converged);
        for (std::size_t n : g->interior()) CHECK(f2[n] > f[n]);
    }
}

TEST_CASE("the solution does not depend on the initial guess") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    std::mt19937_64 rng(23);
    auto phi = random_smooth_phi(g, rng);
    SolverOptions opts;
    auto [f0, r0] = solve_dirichlet_v(g, phi, 0.5, center_node(*g), opts);
    ScalarField guess = ScalarField::zeros(g);
    for (std::size_t n : g->interior()) guess[n] = 5 * std::sin(7 * g->node(n).x);
    auto [f1, r1] = solve_dirichlet_v(g, phi, 0.5, center_node(*g), opts, &guess);
    REQUIRE(r0.converged);
    REQUIRE(r1.converged);
    for (std::size_t n = 0; n < g->size(); ++n) CHECK(std::abs(f0.v[n] - f1.v[n]) <= 1e-9);
}

TEST_CASE("a = 0 is rejected") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    auto phi = make_phi(g, "cos-1", PhiTarget::f, 0.0);
    CHECK_THROWS_WITH_AS(solve_dirichlet_f(g, phi, 0.0), doctest::Contains("zero-a-rejected"), Error);
    CHECK_THROWS_WITH_AS(solve_dirichlet_v(g, phi, 0.0, center_node(*g)), doctest::Contains("zero-a-rejected"), Error);
}

TEST_CASE("small a uses continuation") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto phi = make_phi(g, "cos-2", PhiTarget::f, 1e-3);
    auto [f, rep] = solve_dirichlet_f(g, phi, 1e-3);
    CHECK(rep.converged);
    CHECK(rep.final_residual <= 1e-10);
}

TEST_CASE("uniqueness audit") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    SolverOptions opts;
    opts.audit_uniqueness = true;
    auto [f, rep] = solve_dirichlet_f(g, make_phi(g, "cos-2", PhiTarget::f, 1.0), 1.0, opts);
    REQUIRE(rep.converged);
    CHECK(rep.uniqueness_gap >= 0);
    CHECK(rep.uniqueness_gap <= 1e-9);
}

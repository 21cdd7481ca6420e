#include <doctest.h>

#include <cmath>

#include "slcr/cauchy_riemann.hpp"
#include "slcr/error.hpp"

using namespace slcr;

TEST_CASE("affine pair has zero discrete residual") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto p = sample_pair(g, affine_pair(1.5, -0.3, 0.2), 0.7);
    auto [r1, r2] = cr_residual(p);
    for (std::size_t n : g->interior()) {
        CHECK(std::abs(r1[n]) < 1e-12);
        CHECK(std::abs(r2[n]) < 1e-12);
    }
    for (std::size_t n : g->loop()) CHECK_FALSE(r1.is_valid(n));
}

TEST_CASE("Harvey-Lawson residual shrinks at second order") {
    const double a = 1.0;
    double prev = 0;
    for (int nx : {33, 65, 129}) {
        auto g = build_grid(Rectangle{1.0, 2.0, -0.5, 0.5}, nx, nx);
        auto [r1, r2] = cr_residual(sample_pair(g, harvey_lawson_pair(a), a));
        double e = 0;
        for (std::size_t n : g->interior()) e = std::max({e, std::abs(r1[n]), std::abs(r2[n])});
        if (prev > 0) CHECK(std::log2(prev / e) >= 1.9);
        prev = e;
    }
}

TEST_CASE("potential of the affine pair") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 21, 21);
    const double al = 2.0, be = 3.0, ga = 0.5;
    auto p = sample_pair(g, affine_pair(al, be, ga), 1.0);
    std::size_t anchor = center_node(*g);
    PathAudit audit;
    auto f = potential_from_pair(p, anchor, 0.1, &audit);
    CHECK(audit.path_gap < 1e-14);
    for (std::size_t n = 0; n < g->size(); ++n) {
        double x = g->node(n).x, y = g->node(n).y;
        CHECK(f[n] == doctest::Approx(al * x * y + be * y + ga * x).epsilon(1e-12).scale(10));
    }
    auto q = pair_from_potential(f, 1.0);
    for (std::size_t n : g->interior()) {
        CHECK(q.u[n] == doctest::Approx(p.u[n]).epsilon(1e-12));
        CHECK(q.v[n] == doctest::Approx(p.v[n]).epsilon(1e-12));
    }
}

TEST_CASE("a non-closed form is rejected") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 21, 21);
    auto P = ScalarField::sample(g, [](double, double y) { return -y; });
    auto Q = ScalarField::sample(g, [](double x, double) { return x; });
    CHECK_THROWS_WITH_AS(integrate_form(P, Q, center_node(*g), 0.1), doctest::Contains("path-dependence-exceeds-tolerance"),
                         Error);
    CHECK_THROWS_WITH_AS(integrate_form(P, Q, g->size(), 0.1), doctest::Contains("invalid-anchor"), Error);
}

TEST_CASE("u from affine v") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto v = ScalarField::sample(g, [](double, double y) { return 2 * y + 0.25; });
    std::size_t anchor = center_node(*g);
    auto u = u_from_v(v, 1.0, anchor);
    double x0 = g->node(anchor).x;
    for (std::size_t n = 0; n < g->size(); ++n) CHECK(u[n] == doctest::Approx(2 * (g->node(n).x - x0)).scale(1));
    CHECK_THROWS_WITH_AS(u_from_v(v, 0.0, anchor), doctest::Contains("zero-a-rejected"), Error);
}

TEST_CASE("inverse of the identity is the identity") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 17, 17);
    auto q = inverse_pair(sample_pair(g, affine_pair(1, 0, 0), 1.0));
    std::size_t valid = 0;
    for (std::size_t n = 0; n < q.grid()->size(); ++n) {
        if (!q.u.is_valid(n)) continue;
        ++valid;
        CHECK(q.u[n] == doctest::Approx(q.grid()->node(n).x).scale(1));
        CHECK(q.v[n] == doctest::Approx(q.grid()->node(n).y).scale(1));
    }
    CHECK(valid == q.grid()->size());
}

TEST_CASE("inverse of a dilation") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 17, 17);
    auto q = inverse_pair(sample_pair(g, affine_pair(2, 0, 0), 1.0));
    for (std::size_t n = 0; n < q.grid()->size(); ++n) {
        REQUIRE(q.u.is_valid(n));
        CHECK(q.u[n] == doctest::Approx(0.5 * q.grid()->node(n).x).scale(1));
        CHECK(q.v[n] == doctest::Approx(0.5 * q.grid()->node(n).y).scale(1));
    }
}

TEST_CASE("folded maps are not inverted") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 17, 17);
    SolutionPair p;
    p.a = 1;
    p.u = ScalarField::sample(g, [](double x, double) { return x * x; });
    p.v = ScalarField::sample(g, [](double, double y) { return y; });
    CHECK_THROWS_WITH_AS(inverse_pair(p), doctest::Contains("non-injective-map"), Error);
}

TEST_CASE("pair JSON round trip") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    auto p = sample_pair(g, harvey_lawson_pair(0.5), 0.5);
    auto q = pair_from_json(nlohmann::json::parse(to_json(p).dump()));
    CHECK(q.a == p.a);
    CHECK(q.u.values == p.u.values);
    CHECK(q.v.values == p.v.values);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "slcr/error.hpp"
#include "slcr/grid.hpp"

using namespace slcr;

namespace {

double signed_area(const GridDomain& g) {
    double A = 0;
    const auto& loop = g.loop();
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const Node& p = g.node(loop[k]);
        const Node& q = g.node(loop[(k + 1) % loop.size()]);
        A += p.x * q.y - q.x * p.y;
    }
    return 0.5 * A;
}

BoundaryFunction rotated(const BoundaryFunction& b, std::size_t s) {
    BoundaryFunction r = b;
    for (std::size_t k = 0; k < b.size(); ++k) r.samples[k] = b[(k + s) % b.size()];
    return r;
}

}  // namespace

TEST_CASE("unit square 5x5 has 25 nodes and a 16-node loop") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 5, 5);
    CHECK(g->size() == 25);
    CHECK(g->loop().size() == 16);
    CHECK(g->interior().size() == 9);
    CHECK(signed_area(*g) == doctest::Approx(1.0));
}

TEST_CASE("disc nodes lie in the closed disc up to one cell") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    double h = g->hx();
    for (std::size_t n = 0; n < g->size(); ++n) {
        const Node& nd = g->node(n);
        CHECK(std::hypot(nd.x, nd.y) <= 1 + h);
    }
    // Interior nodes are strictly inside and have the full five-point stencil.
    for (std::size_t n : g->interior()) {
        const Node& nd = g->node(n);
        CHECK(nd.x * nd.x + nd.y * nd.y <= 1 + 1e-12);
        for (int d = 0; d < 4; ++d) CHECK(g->neighbor(n, static_cast<Dir>(d)) != GridDomain::npos);
    }
    CHECK(signed_area(*g) > 0);
    CHECK(signed_area(*g) == doctest::Approx(std::numbers::pi).epsilon(0.05));
}

TEST_CASE("loop parameter increases strictly and covers [0, 2pi)") {
    for (auto shape : {Shape{Disc{0.3, -0.2, 1.5}}, Shape{Rectangle{-1, 2, 0, 1}}}) {
        auto g = build_grid(shape, 21, 17);
        const auto& th = g->theta();
        REQUIRE(th.size() == g->loop().size());
        CHECK(th.front() == 0.0);
        for (std::size_t k = 1; k < th.size(); ++k) CHECK(th[k] > th[k - 1]);
        CHECK(th.back() < 2 * std::numbers::pi);
        for (std::size_t k = 0; k < th.size(); ++k) CHECK(g->loop_position(g->loop()[k]) == k);
    }
}

TEST_CASE("bad shapes and coarse grids are rejected") {
    CHECK_THROWS_WITH_AS(build_grid(Rectangle{0, 1, 0, 0}, 5, 5), doctest::Contains("invalid-shape-parameters"), Error);
    CHECK_THROWS_WITH_AS(build_grid(Disc{0, 0, -1}, 9, 9), doctest::Contains("invalid-shape-parameters"), Error);
    CHECK_THROWS_WITH_AS(build_grid(Rectangle{0, 1, 0, 1}, 3, 5), doctest::Contains("resolution-too-coarse"), Error);
}

TEST_CASE("gradient is exact on affine and bilinear fields") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    auto [fx, fy] = field_gradient(ScalarField::sample(g, [](double x, double) { return x; }));
    auto [bx, by] = field_gradient(ScalarField::sample(g, [](double x, double y) { return x * y; }));
    for (std::size_t n : g->interior()) {
        const Node& nd = g->node(n);
        CHECK(fx[n] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(fy[n]) < 1e-13);
        CHECK(bx[n] == doctest::Approx(nd.y).epsilon(1e-12));
        CHECK(by[n] == doctest::Approx(nd.x).epsilon(1e-12));
    }
}

TEST_CASE("gradient of sin x converges at second order") {
    double prev = 0;
    for (int n : {17, 33, 65}) {
        auto g = build_grid(Rectangle{0, 2, 0, 1}, n, n);
        auto [fx, fy] = field_gradient(ScalarField::sample(g, [](double x, double) { return std::sin(x); }));
        double e = 0;
        for (std::size_t m : g->interior()) e = std::max(e, std::abs(fx[m] - std::cos(g->node(m).x)));
        if (prev > 0) CHECK(prev / e == doctest::Approx(4.0).epsilon(0.05));
        prev = e;
    }
}

TEST_CASE("interpolation reproduces linear fields inside the hull") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    auto f = ScalarField::sample(g, [](double x, double y) { return 2 * x - y + 0.5; });
    for (auto [x, y] : {std::pair{0.1, 0.2}, {-0.5, 0.3}, {0.0, -0.77}}) {
        auto v = f.interpolate(x, y);
        REQUIRE(v);
        CHECK(*v == doctest::Approx(2 * x - y + 0.5).epsilon(1e-12));
    }
    CHECK_FALSE(f.interpolate(2.0, 0.0));
}

TEST_CASE("Morse classification") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto c1 = classify_morse(BoundaryFunction::from_theta(g, [](double t) { return std::cos(t); }));
    CHECK(c1.is_morse);
    CHECK(c1.l == 1);
    REQUIRE(c1.maxima.size() == 1);
    REQUIRE(c1.minima.size() == 1);
    CHECK(std::abs(std::remainder(c1.maxima[0], 2 * std::numbers::pi)) < 0.2);
    CHECK(c1.minima[0] == doctest::Approx(std::numbers::pi).epsilon(0.06));
    CHECK(classify_morse(BoundaryFunction::from_theta(g, [](double t) { return std::cos(2 * t); })).l == 2);
    auto flat = classify_morse(BoundaryFunction::from_theta(g, [](double) { return 0.0; }));
    CHECK_FALSE(flat.is_morse);
    CHECK(flat.reason == "flat-segment-detected");
}

TEST_CASE("transverse classification") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto s = classify_transverse(BoundaryFunction::from_theta(g, [](double t) { return std::sin(t + 0.01); }));
    CHECK(s.is_transverse);
    CHECK(s.l == 1);
    REQUIRE(s.increasing_zeros.size() == 1);
    REQUIRE(s.decreasing_zeros.size() == 1);
    CHECK(s.decreasing_zeros[0] == doctest::Approx(std::numbers::pi).epsilon(0.06));
    auto pos = classify_transverse(BoundaryFunction::from_theta(g, [](double t) { return 1 + 0.5 * std::sin(t); }));
    CHECK(pos.is_transverse);
    CHECK(pos.l == 0);
    auto sq = classify_transverse(BoundaryFunction::from_theta(g, [](double t) { return std::sin(t) * std::sin(t); }));
    CHECK_FALSE(sq.is_transverse);
}

TEST_CASE("classification is invariant under cyclic re-indexing") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    auto phi = BoundaryFunction::from_theta(g, [](double t) { return std::cos(3 * t) + 0.3 * std::sin(t); });
    auto w = BoundaryFunction::from_theta(g, [](double t) { return std::sin(2 * t) + 0.2; });
    for (std::size_t s : {1, 7, 40}) {
        CHECK(classify_morse(rotated(phi, s)).l == classify_morse(phi).l);
        CHECK(classify_transverse(rotated(w, s)).l == classify_transverse(w).l);
    }
}

TEST_CASE("too few samples") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 4, 4);
    BoundaryFunction b{g, std::vector<double>(5, 1.0)};
    CHECK_THROWS_WITH_AS(classify_morse(b), doctest::Contains("too-few-samples"), Error);
}

TEST_CASE("JSON round trip is bit-exact") {
    auto g = build_grid(Disc{0.1, 0.2, 0.9}, 19, 23);
    auto f = ScalarField::sample(g, [](double x, double y) { return std::exp(x) * std::cos(3 * y) / 7; });
    auto j = to_json(f);
    auto back = field_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.size() == f.size());
    for (std::size_t n = 0; n < f.size(); ++n) CHECK(back[n] == f[n]);
    CHECK(back.grid->node(5).x == g->node(5).x);
    auto b = BoundaryFunction::trace(f);
    auto bb = boundary_from_json(nlohmann::json::parse(to_json(b).dump()));
    CHECK(bb.samples == b.samples);
}

TEST_CASE("CSV has the documented header") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 4, 4);
    auto csv = to_csv(ScalarField::zeros(g));
    CHECK(csv.rfind("i,j,x,y,value\n", 0) == 0);
}

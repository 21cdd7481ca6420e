#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "slcr/error.hpp"
#include "slcr/phi.hpp"
#include "slcr/winding.hpp"

using namespace slcr;

namespace {

std::vector<std::pair<double, double>> circle_loop(int k, int samples, double r = 1.0) {
    std::vector<std::pair<double, double>> pts;
    for (int s = 0; s < samples; ++s) {
        double t = 2 * std::numbers::pi * s / samples;
        pts.emplace_back(r * std::cos(k * t), r * std::sin(k * t));
    }
    return pts;
}

SolutionPair field_pair(const GridPtr& g, double a, std::function<std::pair<double, double>(double, double)> fn) {
    SolutionPair p;
    p.a = a;
    p.u = ScalarField::sample(g, [&](double x, double y) { return fn(x, y).first; });
    p.v = ScalarField::sample(g, [&](double x, double y) { return fn(x, y).second; });
    return p;
}

}  // namespace

TEST_CASE("winding of sampled circles") {
    for (int k = -3; k <= 3; ++k) CHECK(winding_number(circle_loop(k, 64)) == k);
    auto bad = circle_loop(1, 64);
    bad[10] = {0.0, 0.0};
    CHECK_THROWS_WITH_AS(winding_number(bad), doctest::Contains("zero-on-loop"), Error);
    CHECK_THROWS_WITH_AS(winding_number(circle_loop(1, 2)), doctest::Contains("inadequate-sampling"), Error);
}

TEST_CASE("simple zero of an affine difference") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 33, 33);
    auto p1 = sample_pair(g, affine_pair(1, 0.1, 0.2), 1.0);
    auto p2 = sample_pair(g, affine_pair(2, 0.3, -0.1), 1.0);
    auto r = find_zeros(p1, p2);
    REQUIRE(r.zeros.size() == 1);
    CHECK(r.zeros[0].k == 1);
    // x + 0.1 = 2x + 0.3, y + 0.2 = 2y - 0.1
    CHECK(r.zeros[0].x == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(r.zeros[0].y == doctest::Approx(0.3).epsilon(1e-9));
    REQUIRE(r.boundary_winding);
    CHECK(*r.boundary_winding == 1);
    CHECK(r.interior_sum == 1);
    CHECK(r.m == 0);
}

TEST_CASE("local model of the coordinate difference") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 41, 41);
    auto p1 = sample_pair(g, affine_pair(1, 0, 0), 1.0);
    auto p2 = field_pair(g, 1.0, [](double, double) { return std::pair{0.0, 0.0}; });
    auto r = find_zeros(p1, p2);
    REQUIRE(r.zeros.size() == 1);
    auto m = fit_local_model(p1, p2, r.zeros[0]);
    CHECK(m.k == 1);
    CHECK(m.lambda == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(m.C - std::complex<double>(1, 0)) < 1e-8);
    CHECK(m.residual < 1e-8);
}

TEST_CASE("manufactured double zero") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 41, 41);
    auto p1 = field_pair(g, 1.0, [](double x, double y) { return std::pair{x * x - y * y, 2 * x * y}; });
    auto p2 = field_pair(g, 1.0, [](double, double) { return std::pair{0.0, 0.0}; });
    auto r = find_zeros(p1, p2);
    REQUIRE(r.zeros.size() == 1);
    CHECK(r.zeros[0].k == 2);
    CHECK(std::abs(r.zeros[0].x) < 0.05);
    CHECK(std::abs(r.zeros[0].y) < 0.05);
    REQUIRE(r.boundary_winding);
    CHECK(*r.boundary_winding == 2);
}

TEST_CASE("identical and mismatched pairs") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 17, 17);
    auto p = sample_pair(g, affine_pair(1, 0, 0), 1.0);
    CHECK_THROWS_WITH_AS(find_zeros(p, p), doctest::Contains("identical-pairs"), Error);
    auto h = build_grid(Rectangle{-1, 1, -1, 1}, 19, 19);
    CHECK_THROWS_WITH_AS(find_zeros(p, sample_pair(h, affine_pair(1, 0, 0), 1.0)), doctest::Contains("pair-mismatch"),
                         Error);
}

TEST_CASE("zero on the boundary is counted in m") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 17, 17);
    auto p1 = sample_pair(g, affine_pair(1, 0, 0), 1.0);
    auto p2 = field_pair(g, 1.0, [](double, double) { return std::pair{0.0, 0.0}; });
    auto r = find_zeros(p1, p2);
    CHECK(r.m >= 1);
    CHECK_FALSE(r.boundary_winding);
}

TEST_CASE("count audits") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 33, 33);
    auto p1 = sample_pair(g, affine_pair(1, 0.1, 0.2), 1.0);
    auto p2 = sample_pair(g, affine_pair(2, 0.3, -0.1), 1.0);
    auto r = find_zeros(p1, p2);
    auto t = audit_count_transverse(p1, p2, r);
    CHECK(t.l >= 1);
    CHECK(t.count == 1);
    CHECK(t.passed());

    auto phi1 = make_phi(g, "affine:1,0.2,0.1", PhiTarget::f, 1.0);
    auto phi2 = make_phi(g, "affine:2,-0.1,0.3", PhiTarget::f, 1.0);
    auto m = audit_count_morse(phi1, phi2, r);
    CHECK(m.count == 1);
    REQUIRE(m.k_df);
    CHECK(m.winding_passed);
    CHECK(m.bound_passed == (m.count <= m.l - 1));

    auto flat = make_phi(g, "const:0", PhiTarget::f, 1.0);
    CHECK_THROWS_WITH_AS(audit_count_morse(flat, flat, r), doctest::Contains("not-morse"), Error);
}

TEST_CASE("forbidden data transform") {
    auto [p1, q1] = forbidden_data_transform(0, 0, 0, 1, 0, 1);
    CHECK(p1 == doctest::Approx(-2.0));
    CHECK(q1 == 0.0);
    auto [p2, q2] = forbidden_data_transform(0, 0, 0, 0, 1, 1);
    CHECK(p2 == 0.0);
    CHECK(q2 == doctest::Approx(1.0));
    CHECK_THROWS_WITH_AS(forbidden_data_transform(0, 0, 0, 0, 0, 1), doctest::Contains("zero-derivative-data"), Error);
    CHECK_THROWS_WITH_AS(forbidden_data_transform(0, 0, 0, 1, 0, 0), doctest::Contains("zero-a-rejected"), Error);
}

TEST_CASE("report JSON") {
    auto g = build_grid(Rectangle{-1, 1, -1, 1}, 33, 33);
    auto r = find_zeros(sample_pair(g, affine_pair(1, 0.1, 0.2), 1.0), sample_pair(g, affine_pair(2, 0.3, -0.1), 1.0));
    auto j = to_json(r);
    CHECK(j.at("zeros").size() == 1);
    CHECK(j.at("interior_sum") == 1);
    CHECK(j.at("boundary_winding") == 1);
}

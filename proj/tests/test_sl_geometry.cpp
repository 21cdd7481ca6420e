#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "slcr/error.hpp"
#include "slcr/sl_geometry.hpp"

using namespace slcr;

namespace {

const cplx I{0, 1};

double dist(const C3& a, const C3& b) {
    return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]) + std::norm(a[2] - b[2]));
}

C3 random_c3(std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    return {cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng))};
}

}  // namespace

TEST_CASE("standard frame") {
    C3 e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
    CHECK(std::abs(holomorphic_volume(e1, e2, e3) - cplx(1, 0)) < 1e-15);
    CHECK(kahler_form(e1, C3{I, 0, 0}) == doctest::Approx(1.0));
    CHECK(dist(cross_product(e1, e2), e3) < 1e-15);
}

TEST_CASE("algebraic identities on random vectors") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 200; ++k) {
        C3 r = random_c3(rng), s = random_c3(rng), t = random_c3(rng);
        double sc = norm(r) * norm(s);
        CHECK(std::abs(kahler_form(r, s) + kahler_form(s, r)) <= 1e-12 * sc);
        CHECK(std::abs(metric_g(r, s) - metric_g(s, r)) <= 1e-12 * sc);
        C3 x = cross_product(r, s);
        CHECK(std::abs(metric_g(x, r)) <= 1e-12 * sc * norm(r));
        CHECK(std::abs(kahler_form(x, r)) <= 1e-12 * sc * norm(r));
        // g(r x s, t) = Re Omega(r, s, t)
        CHECK(std::abs(metric_g(x, t) - holomorphic_volume(r, s, t).real()) <= 1e-12 * sc * norm(t));

        Mat3 U = random_su3(rng);
        CHECK(std::abs(holomorphic_volume(mat_vec(U, r), mat_vec(U, s), mat_vec(U, t)) -
                       holomorphic_volume(r, s, t)) <= 1e-12 * sc * norm(t));
        CHECK(std::abs(kahler_form(mat_vec(U, r), mat_vec(U, s)) - kahler_form(r, s)) <= 1e-12 * sc);
    }
}

TEST_CASE("lifts") {
    auto p = lift_point(0, 1, -1, 0, 0, 0);
    CHECK(dist(p.z, C3{1, I, -I}) < 1e-14);
    auto q = lift_point(0, 0, 0, 0, 1, 0);
    CHECK(dist(q.z, C3{std::sqrt(2.0), 0, 0}) < 1e-14);
    auto r = lift_point(0.3, -0.4, 0.2, 0.5, 0.7, 1.1);
    CHECK(std::norm(r.z[0]) - std::norm(r.z[1]) == doctest::Approx(1.4));
    CHECK(std::abs(r.z[0] * r.z[1] - cplx(0.5, -0.4)) < 1e-14);
    CHECK(std::arg(r.z[0]) == doctest::Approx(1.1));
}

TEST_CASE("Harvey-Lawson lift is special Lagrangian") {
    auto g = build_grid(Disc{0, 0, 1}, 65, 65);
    auto rep = verify_sl(sample_pair(g, harvey_lawson_pair(1.0), 1.0), 8);
    CHECK(rep.nodes > 0);
    CHECK(rep.max_omega < 1e-3);
    CHECK(rep.max_im_Omega < 1e-2);
    CHECK(rep.min_re_Omega > 0.5);
}

TEST_CASE("a non-solution is not special Lagrangian") {
    auto g = build_grid(Disc{0, 0, 1}, 65, 65);
    auto rep = verify_sl(sample_pair(g, catenoid_pair(), 1.0), 8);
    CHECK(rep.max_omega > 1e-2);
}

TEST_CASE("mesh export sizes") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 5, 5);
    std::ostringstream os;
    auto st = write_obj(os, sample_pair(g, affine_pair(1, 0, 0.5), 1.0), 8);
    CHECK(st.vertices == 200);
    // 20 east and 20 north edges, each swept over 8 angles.
    CHECK(st.faces == 320);
    CHECK(st.finite);
    CHECK_THROWS_WITH_AS(export_mesh("/nonexistent-dir/x.obj", sample_pair(g, affine_pair(1, 0, 0.5), 1.0), 8),
                         doctest::Contains("io-failure"), Error);
}

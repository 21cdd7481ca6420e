#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "slcr/error.hpp"
#include "slcr/phi.hpp"

using namespace slcr;

TEST_CASE("named data") {
    auto g = build_grid(Disc{0, 0, 1}, 17, 17);
    auto v = make_phi(g, "affine:2,0,1", PhiTarget::v, 1.0);
    auto f = make_phi(g, "affine:2,3,1", PhiTarget::f, 1.0);
    for (std::size_t k = 0; k < g->loop().size(); ++k) {
        const Node& n = g->node(g->loop()[k]);
        CHECK(v[k] == 2 * n.y + 1);
        CHECK(f[k] == doctest::Approx(2 * n.x * n.y + 3 * n.y + n.x));
    }
    auto c = make_phi(g, "cos-2", PhiTarget::f, 1.0);
    CHECK(classify_morse(c).l == 2);
    auto k = make_phi(g, "const:3.5", PhiTarget::v, 1.0);
    for (double s : k.samples) CHECK(s == 3.5);
    CHECK_THROWS_AS(make_phi(g, "harmonic-x", PhiTarget::f, 1.0), Error);
    CHECK_THROWS_WITH_AS(make_phi(g, "/no/such/file.csv", PhiTarget::f, 1.0), doctest::Contains("invalid-phi"), Error);
}

TEST_CASE("CSV data with header and wrong length") {
    auto g = build_grid(Rectangle{0, 1, 0, 1}, 5, 5);
    std::string path = "phi_test.csv";
    {
        std::ofstream out(path);
        out << "k,value\n";
        for (std::size_t k = 0; k < g->loop().size(); ++k) out << k << "," << 0.5 * k << "\n";
    }
    auto b = load_phi_csv(g, path);
    REQUIRE(b.size() == 16);
    CHECK(b[3] == 1.5);
    {
        std::ofstream out(path);
        out << "1\n2\n";
    }
    CHECK_THROWS_WITH_AS(load_phi_csv(g, path), doctest::Contains("invalid-phi"), Error);
    std::remove(path.c_str());
}

TEST_CASE("random data is reproducible from the seed") {
    auto g = build_grid(Disc{0, 0, 1}, 33, 33);
    std::mt19937_64 r1(5), r2(5), r3(6);
    auto a = random_smooth_phi(g, r1);
    auto b = random_smooth_phi(g, r2);
    auto c = random_smooth_phi(g, r3);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
}

#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "slcr/kernels.hpp"

using namespace slcr::kernels;

TEST_CASE("active table is available") {
    CHECK(active_kernels().name != nullptr);
    CHECK(scalar_kernels().ellipticity != nullptr);
}

TEST_CASE("vector kernels agree bit for bit with the scalar reference") {
    const KernelTable* vec = avx2_kernels();
    if (!vec) {
        MESSAGE("no vector variant on this machine");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        std::vector<double> ux(n), uy(n), vx(n), vy(n), v(n), y(n);
        for (std::size_t k = 0; k < n; ++k) {
            ux[k] = U(rng);
            uy[k] = U(rng);
            vx[k] = U(rng);
            vy[k] = U(rng);
            v[k] = U(rng);
            y[k] = U(rng);
        }
        for (double a2 : {0.0, 1e-6, 0.49}) {
            std::vector<double> e1(n), e2(n), r1(n), r2(n), s1(n), s2(n);
            ref.ellipticity(v.data(), y.data(), a2, e1.data(), n);
            vec->ellipticity(v.data(), y.data(), a2, e2.data(), n);
            CHECK(std::memcmp(e1.data(), e2.data(), n * sizeof(double)) == 0);
            ref.cr_combine(ux.data(), uy.data(), vx.data(), vy.data(), v.data(), y.data(), a2, r1.data(), r2.data(), n);
            vec->cr_combine(ux.data(), uy.data(), vx.data(), vy.data(), v.data(), y.data(), a2, s1.data(), s2.data(),
                            n);
            CHECK(std::memcmp(r1.data(), s1.data(), n * sizeof(double)) == 0);
            CHECK(std::memcmp(r2.data(), s2.data(), n * sizeof(double)) == 0);
        }
    }
}

#include <immintrin.h>

#include <cmath>

#include "slcr/kernels.hpp"

namespace slcr::kernels {

namespace {

void ellipticity(const double* v, const double* y, double a2, double* out, std::size_t n) {
    const __m256d va2 = _mm256_set1_pd(a2), one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d vv = _mm256_loadu_pd(v + k), yy = _mm256_loadu_pd(y + k);
        __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vv, vv), _mm256_mul_pd(yy, yy)), va2);
        _mm256_storeu_pd(out + k, _mm256_div_pd(one, _mm256_sqrt_pd(s)));
    }
    for (; k < n; ++k) out[k] = 1.0 / std::sqrt(v[k] * v[k] + y[k] * y[k] + a2);
}

void cr_combine(const double* ux, const double* uy, const double* vx, const double* vy, const double* v,
                const double* y, double a2, double* r1, double* r2, std::size_t n) {
    const __m256d va2 = _mm256_set1_pd(a2), two = _mm256_set1_pd(2.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d vv = _mm256_loadu_pd(v + k), yy = _mm256_loadu_pd(y + k);
        __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vv, vv), _mm256_mul_pd(yy, yy)), va2);
        __m256d c = _mm256_mul_pd(_mm256_mul_pd(two, _mm256_sqrt_pd(s)), _mm256_loadu_pd(uy + k));
        _mm256_storeu_pd(r1 + k, _mm256_sub_pd(_mm256_loadu_pd(ux + k), _mm256_loadu_pd(vy + k)));
        _mm256_storeu_pd(r2 + k, _mm256_add_pd(_mm256_loadu_pd(vx + k), c));
    }
    for (; k < n; ++k) {
        r1[k] = ux[k] - vy[k];
        r2[k] = vx[k] + 2.0 * std::sqrt(v[k] * v[k] + y[k] * y[k] + a2) * uy[k];
    }
}

}  // namespace

const KernelTable* avx2_kernels_impl() {
    static const KernelTable t{"avx2", ellipticity, cr_combine};
    return &t;
}

}  // namespace slcr::kernels

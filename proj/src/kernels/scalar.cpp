#include <cmath>

#include "slcr/kernels.hpp"

namespace slcr::kernels {

namespace {

void ellipticity(const double* v, const double* y, double a2, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = 1.0 / std::sqrt(v[k] * v[k] + y[k] * y[k] + a2);
}

void cr_combine(const double* ux, const double* uy, const double* vx, const double* vy, const double* v,
                const double* y, double a2, double* r1, double* r2, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        r1[k] = ux[k] - vy[k];
        r2[k] = vx[k] + 2.0 * std::sqrt(v[k] * v[k] + y[k] * y[k] + a2) * uy[k];
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable t{"scalar", ellipticity, cr_combine};
    return t;
}

}  // namespace slcr::kernels

#pragma once

#include <cstddef>

namespace slcr::kernels {

// Pointwise kernels shared by the residual and Jacobian assemblies. Every
// variant performs the same IEEE operations in the same order (no fused
// multiply-add), so results are bit-identical across variants.
struct KernelTable {
    const char* name;
    // out[k] = 1 / sqrt(v[k]^2 + y[k]^2 + a2)
    void (*ellipticity)(const double* v, const double* y, double a2, double* out, std::size_t n);
    // r1 = ux - vy,  r2 = vx + 2 sqrt(v^2 + y^2 + a2) uy
    void (*cr_combine)(const double* ux, const double* uy, const double* vx, const double* vy,
                       const double* v, const double* y, double a2, double* r1, double* r2,
                       std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
// Best available table; SLCR_KERNELS=scalar in the environment forces the
// reference path.
const KernelTable& active_kernels();

}  // namespace slcr::kernels

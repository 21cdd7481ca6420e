#include <cstdlib>
#include <cstring>

#include "slcr/kernels.hpp"

namespace slcr::kernels {

#ifdef SLCR_HAVE_AVX2
const KernelTable* avx2_kernels_impl();
#endif

const KernelTable* avx2_kernels() {
#ifdef SLCR_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? avx2_kernels_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("SLCR_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        const KernelTable* v = avx2_kernels();
        return v ? v : &scalar_kernels();
    }();
    return *chosen;
}

}  // namespace slcr::kernels

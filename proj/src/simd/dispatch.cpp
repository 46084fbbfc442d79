#include <cstdlib>
#include <string_view>

#include "krein/simd/kernels.hpp"

namespace krein::simd {

#if defined(KREIN_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(KREIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() {
    const char* env = std::getenv("KREIN_SIMD");
    const std::string_view request = env ? env : "";
    if (request == "scalar") return scalar_kernels();
    if (const KernelTable* wide = avx2_kernels()) return *wide;
    return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
    static const KernelTable& active = select();
    return active;
}

}  // namespace krein::simd

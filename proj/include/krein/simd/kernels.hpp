#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace krein::simd {

using cplx = std::complex<double>;

// Inner loops shared by the dense linear algebra. Every entry has a scalar
// reference implementation; wider variants must agree with it to rounding.
struct KernelTable {
    std::string_view name;

    // y[i] += alpha * x[i]
    void (*caxpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);

    // (x, y) <- (a x + b y, c x + d y), elementwise
    void (*rotate)(std::size_t n, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d);

    // out[i] = k[i] * x[i] with a real weight vector k
    void (*scale_real)(std::size_t n, const double* k, const cplx* x, cplx* out);

    // sum |x[i]|^2
    double (*sum_sq_abs)(std::size_t n, const cplx* x);
};

const KernelTable& scalar_kernels();

// nullptr when the build has no AVX2 table or the host lacks AVX2+FMA.
const KernelTable* avx2_kernels();

// Best table for this host, chosen once. KREIN_SIMD=scalar|avx2 overrides.
const KernelTable& kernels();

}  // namespace krein::simd

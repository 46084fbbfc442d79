#include "krein/simd/kernels.hpp"

namespace krein::simd {
namespace {

void caxpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
    }
}

inline cplx mul(cplx a, cplx b) {
    // plain formula; std::complex operator* adds inf/nan recovery we do not want here
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void rotate_scalar(std::size_t n, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = mul(a, xi) + mul(b, yi);
        y[i] = mul(c, xi) + mul(d, yi);
    }
}

void scale_real_scalar(std::size_t n, const double* k, const cplx* x, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = cplx(k[i] * x[i].real(), k[i] * x[i].imag());
}

double sum_sq_abs_scalar(std::size_t n, const cplx* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", &caxpy_scalar, &rotate_scalar, &scale_real_scalar,
                                   &sum_sq_abs_scalar};
    return table;
}

}  // namespace krein::simd

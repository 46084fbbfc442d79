// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "krein/simd/kernels.hpp"

namespace krein::simd {
namespace {

// std::complex<double> is layout-compatible with double[2]; a __m256d holds two
// interleaved complex values [re0, im0, re1, im1].

inline __m256d cmul_scalar(__m256d v, __m256d sr, __m256d si) {
    // (vr + i vi)(sr + i si): even lanes vr sr - vi si, odd lanes vi sr + vr si
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(v, sr, _mm256_mul_pd(swapped, si));
}

void caxpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const auto* xs = reinterpret_cast<const double*>(x);
    auto* ys = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
        _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(yv, cmul_scalar(xv, ar, ai)));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
                    y[i].imag() + (alpha.real() * xi + alpha.imag() * xr));
    }
}

void rotate_avx2(std::size_t n, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d) {
    auto* xs = reinterpret_cast<double*>(x);
    auto* ys = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
    const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
    const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
    const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
        const __m256d nx = _mm256_add_pd(cmul_scalar(xv, ar, ai), cmul_scalar(yv, br, bi));
        const __m256d ny = _mm256_add_pd(cmul_scalar(xv, cr, ci), cmul_scalar(yv, dr, di));
        _mm256_storeu_pd(xs + 2 * i, nx);
        _mm256_storeu_pd(ys + 2 * i, ny);
    }
    for (; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = cplx(a.real() * xi.real() - a.imag() * xi.imag() + b.real() * yi.real() - b.imag() * yi.imag(),
                    a.real() * xi.imag() + a.imag() * xi.real() + b.real() * yi.imag() + b.imag() * yi.real());
        y[i] = cplx(c.real() * xi.real() - c.imag() * xi.imag() + d.real() * yi.real() - d.imag() * yi.imag(),
                    c.real() * xi.imag() + c.imag() * xi.real() + d.real() * yi.imag() + d.imag() * yi.real());
    }
}

void scale_real_avx2(std::size_t n, const double* k, const cplx* x, cplx* out) {
    const auto* xs = reinterpret_cast<const double*>(x);
    auto* os = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // [k0, k0, k1, k1]
        const __m128d kk = _mm_loadu_pd(k + i);
        const __m256d kv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(kk), 0b01010000);
        _mm256_storeu_pd(os + 2 * i, _mm256_mul_pd(kv, _mm256_loadu_pd(xs + 2 * i)));
    }
    for (; i < n; ++i) out[i] = cplx(k[i] * x[i].real(), k[i] * x[i].imag());
}

double sum_sq_abs_avx2(std::size_t n, const cplx* x) {
    const auto* xs = reinterpret_cast<const double*>(x);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(xs + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(xs + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d v0 = _mm256_loadu_pd(xs + 2 * i);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
    static const KernelTable table{"avx2", &caxpy_avx2, &rotate_avx2, &scale_real_avx2, &sum_sq_abs_avx2};
    return table;
}

}  // namespace krein::simd

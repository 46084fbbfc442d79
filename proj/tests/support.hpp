#pragma once

// Test-side helpers. Random data here comes from std::mt19937_64 so that
// oracles do not share code paths with the library's generators.

#include <complex>
#include <cstdint>
#include <random>

#include "krein/linalg.hpp"

namespace krein::testing {

inline Matrix random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline RealMatrix random_real(std::uint64_t seed, std::size_t rows, std::size_t cols) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    RealMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

// Textbook triple loop, independent of the SIMD kernels.
inline Matrix naive_product(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

// Unitary from modified Gram-Schmidt on a random complex matrix.
inline Matrix random_unitary(std::uint64_t seed, std::size_t n) {
    Matrix q = random_matrix(seed, n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += std::conj(q(i, k)) * q(i, j);
            for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
    }
    return q;
}

}  // namespace krein::testing

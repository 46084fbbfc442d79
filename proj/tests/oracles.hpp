#pragma once

// Brute-force reference values computed without the library's solvers.

#include <algorithm>
#include <cmath>

#include "krein/linalg.hpp"

namespace krein::testing {

// Inverse square root of the correlation matrix [[1, a], [a, 1]].
inline void inv_sqrt_corr(double a, double out[2][2]) {
    const double p = 1.0 / std::sqrt(1.0 + a), q = 1.0 / std::sqrt(1.0 - a);
    out[0][0] = out[1][1] = 0.5 * (p + q);
    out[0][1] = out[1][0] = 0.5 * (p - q);
}

inline double spectral_norm_2x2(const double n[2][2]) {
    const double a = n[0][0] * n[0][0] + n[1][0] * n[1][0];
    const double d = n[0][1] * n[0][1] + n[1][1] * n[1][1];
    const double b = n[0][0] * n[0][1] + n[1][0] * n[1][1];
    return std::sqrt(0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * b));
}

// Smallest c with [[c P, M], [M^T, c Q]] >= 0 over unit-diagonal 2x2 P, Q:
// c(a, b) = ||P^{-1/2} M Q^{-1/2}||, minimized by a zooming grid over (a, b).
inline double brute_force_norm_2x2(const RealMatrix& m) {
    auto c = [&](double a, double b) {
        double pa[2][2], qb[2][2], t[2][2], n[2][2];
        inv_sqrt_corr(a, pa);
        inv_sqrt_corr(b, qb);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t[i][j] = pa[i][0] * m(0, j) + pa[i][1] * m(1, j);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) n[i][j] = t[i][0] * qb[0][j] + t[i][1] * qb[1][j];
        return spectral_norm_2x2(n);
    };
    double best = c(0.0, 0.0), ba = 0.0, bb = 0.0, radius = 0.999;
    for (int round = 0; round < 40; ++round) {
        const double ca = ba, cb = bb;
        for (int i = -40; i <= 40; ++i)
            for (int j = -40; j <= 40; ++j) {
                const double a = std::clamp(ca + radius * i / 40.0, -0.999999, 0.999999);
                const double b = std::clamp(cb + radius * j / 40.0, -0.999999, 0.999999);
                const double v = c(a, b);
                if (v < best) best = v, ba = a, bb = b;
            }
        radius *= 0.5;
    }
    return best;
}

}  // namespace krein::testing

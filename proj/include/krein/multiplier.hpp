#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "krein/funcat.hpp"
#include "krein/linalg.hpp"

namespace krein {

// Kernel factorization M = left * right. Row i of `left` holds phi_k(x_i),
// column j of `right` holds psi_k(y_j).
struct FactorizationCertificate {
    Matrix left;   // n x r
    Matrix right;  // r x m

    Matrix reproduce() const { return left * right; }
};

// max_i ||left row i|| * max_j ||right column j||; an upper bound for the
// Schur multiplier norm of left * right.
double certificate_bound(const FactorizationCertificate& cert);

// (T Phi)(x_i) = sum_k left[i][k] right[k][i]
std::vector<double> diagonal_trace(const FactorizationCertificate& cert, std::span<const double> points);

// ||M o T||_inf / ||T||_inf
double witness_ratio(const RealMatrix& m, const Matrix& t);

struct MultiplierNormResult {
    double lower = 0.0;  // witness ratio
    double upper = 0.0;  // certificate bound
    FactorizationCertificate certificate;
    Matrix witness;
    int iterations = 0;
    bool converged = false;
    // Final dual weights; usable as a warm start on a larger nested grid.
    std::vector<double> row_weights;
    std::vector<double> col_weights;
};

struct MultiplierOptions {
    int max_iterations = 20000;
    std::vector<double> row_weights;  // optional warm start, nonnegative
    std::vector<double> col_weights;
};

inline constexpr std::size_t kMultiplierMaxDim = 64;

// Schur multiplier norm of M (operator-norm and trace-norm versions agree in
// finite dimension). Maximizes ||D_x M D_y||_S1 over unit x, y >= 0 by
// multiplicative ascent; every iterate gives an explicit witness and an
// explicit factorization. On success upper - lower <= tol * upper. When the
// iteration cap is hit the best bracket is returned with converged = false.
MultiplierNormResult multiplier_norm(const RealMatrix& m, double tol, const MultiplierOptions& options = {});
inline MultiplierNormResult multiplier_norm(const KernelMatrix& k, double tol, const MultiplierOptions& options = {}) {
    return multiplier_norm(k.values, tol, options);
}

enum class GridKind { Uniform, Geometric };

struct GrowthRow {
    int k = 0;       // grid depth (geometric) or index into sizes (uniform)
    std::size_t n = 0;
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Multiplier norms of the Loewner matrix of f on a family of grids. Uniform
// grids use `n` points over the domain; geometric grids use n = 2(k + 1)
// points {c +- 2^-j}. Each grid is solved from a cold start; the lower
// column is kept nondecreasing through zero-padded witnesses.
std::vector<GrowthRow> ol_seminorm_sweep(const ScalarFunction& f, std::span<const int> sizes, GridKind kind,
                                         double tol = 1e-6);

// Upper bounds from ol_seminorm_sweep.
std::vector<double> ol_seminorm_via_grids(const ScalarFunction& f, std::span<const int> sizes,
                                          GridKind kind = GridKind::Uniform, double tol = 1e-6);

// Geometric sweep k = 0..k_max for f (|x| by default).
std::vector<GrowthRow> growth_report(const ScalarFunction& f, int k_max, double tol = 1e-6);
std::vector<GrowthRow> abs_growth_report(int k_max, double tol = 1e-6);

struct EmpiricalOlResult {
    double max_ratio = 0.0;
    int worst_trial = -1;
    double worst_eps = 0.0;
};

// max over seeded pairs (A, A + eps K) of ||f(A) - f(B)||_S1 / ||A - B||_S1,
// eps in {1, 1e-2, 1e-4}. A lower bound for ||f||_OL on the domain.
EmpiricalOlResult ol_seminorm_empirical_detail(const ScalarFunction& f, std::size_t n, int trials,
                                               std::uint64_t seed, unsigned threads = 1);
double ol_seminorm_empirical(const ScalarFunction& f, std::size_t n, int trials, std::uint64_t seed,
                             unsigned threads = 1);

}  // namespace krein

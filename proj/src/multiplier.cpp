#include "krein/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "krein/parallel.hpp"

namespace krein {

double certificate_bound(const FactorizationCertificate& cert) {
    double row = 0.0;
    for (std::size_t i = 0; i < cert.left.rows(); ++i) {
        double s = 0.0;
        for (const auto& z : cert.left.row(i)) s += std::norm(z);
        row = std::max(row, s);
    }
    std::vector<double> col(cert.right.cols(), 0.0);
    for (std::size_t k = 0; k < cert.right.rows(); ++k)
        for (std::size_t j = 0; j < cert.right.cols(); ++j) col[j] += std::norm(cert.right(k, j));
    const double colmax = col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
    // rounded upward so that exact-arithmetic ties cannot fall below a witness
    const double slack = static_cast<double>(cert.left.cols() + 4) * std::numeric_limits<double>::epsilon();
    return std::sqrt(row) * std::sqrt(colmax) * (1.0 + slack);
}

std::vector<double> diagonal_trace(const FactorizationCertificate& cert, std::span<const double> points) {
    const std::size_t n = points.size();
    if (cert.left.rows() != n || cert.right.cols() != n)
        throw ShapeError("diagonal_trace: certificate is not square over the given points");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < cert.left.cols(); ++k) s += cert.left(i, k) * cert.right(k, i);
        out[i] = s.real();
    }
    return out;
}

double witness_ratio(const RealMatrix& m, const Matrix& t) {
    const double denom = schatten_norm(t, Schatten::Inf);
    if (denom == 0.0) return 0.0;
    return schatten_norm(hadamard(m, t), Schatten::Inf) / denom;
}

namespace {

constexpr double kOmega = 1.5;
constexpr double kWeightFloor = 1e-5;

// Unit-norm weights, floored at kWeightFloor times the largest. The optimum
// often sits on the boundary (weights -> 0); below the floor the SVD can no
// longer resolve those rows, and the floor costs O(kWeightFloor^2) in the
// dual value.
void normalize_weights(std::vector<double>& w) {
    double mx = 0.0;
    for (double& v : w) {
        v = std::isfinite(v) ? std::abs(v) : 0.0;
        mx = std::max(mx, v);
    }
    if (mx == 0.0) {
        std::fill(w.begin(), w.end(), 1.0);
        mx = 1.0;
    }
    for (double& v : w) v = std::max(v, kWeightFloor * mx);
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : w) v /= norm;
}

std::vector<double> row_norms_sq(const Matrix& left) {
    std::vector<double> out(left.rows(), 0.0);
    for (std::size_t i = 0; i < left.rows(); ++i)
        for (const auto& z : left.row(i)) out[i] += std::norm(z);
    return out;
}

std::vector<double> col_norms_sq(const Matrix& right) {
    std::vector<double> out(right.cols(), 0.0);
    for (std::size_t k = 0; k < right.rows(); ++k)
        for (std::size_t j = 0; j < right.cols(); ++j) out[j] += std::norm(right(k, j));
    return out;
}

// left * right = [left, a] * [right; b] with a * b = residual
FactorizationCertificate extend(const FactorizationCertificate& cert, const Matrix& a, const Matrix& b) {
    const std::size_t n = cert.left.rows(), c = cert.right.cols(), r = cert.left.cols(), e = a.cols();
    FactorizationCertificate out{Matrix(n, r + e), Matrix(r + e, c)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < r; ++k) out.left(i, k) = cert.left(i, k);
        for (std::size_t k = 0; k < e; ++k) out.left(i, r + k) = a(i, k);
    }
    for (std::size_t j = 0; j < c; ++j) {
        for (std::size_t k = 0; k < r; ++k) out.right(k, j) = cert.right(k, j);
        for (std::size_t k = 0; k < e; ++k) out.right(r + k, j) = b(k, j);
    }
    return out;
}

// Absorb the residual E = M - left*right exactly. Three placements are
// tried and the smallest bound kept:
//   global:  [s E] [(1/s) I]           every row/column grows by <= ||E||_F
//   columns: [E D_v^{-1}] [D_v]        v_j^2 = column slack below the max
//   rows:    [D_u] [D_u^{-1} E]        u_i^2 = row slack below the max
// The slack placements cost nothing on the active rows/columns when the
// residual lives where the weights have gone to zero.
void repair(FactorizationCertificate& cert, const Matrix& m) {
    const Matrix residual = m - cert.reproduce();
    const double ef = residual.frobenius();
    if (ef <= 1e-13 * (1.0 + m.max_abs())) return;
    const std::size_t n = m.rows(), c = m.cols();
    constexpr double kHeadroom = 1e-9;

    std::vector<FactorizationCertificate> options;
    {
        const double s = 1.0 / std::sqrt(ef);
        Matrix a(n, c), b(c, c);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < c; ++j) a(i, j) = s * residual(i, j);
        for (std::size_t j = 0; j < c; ++j) b(j, j) = 1.0 / s;
        options.push_back(extend(cert, a, b));
    }
    const auto cols = col_norms_sq(cert.right);
    const auto rows = row_norms_sq(cert.left);
    const double col_top = *std::max_element(cols.begin(), cols.end()) * (1.0 + kHeadroom) + 1e-300;
    const double row_top = *std::max_element(rows.begin(), rows.end()) * (1.0 + kHeadroom) + 1e-300;
    // t trades slack spent on one side against growth on the other
    for (double t : {1.0, 0.5, 0.25, 0.1, 0.03, 0.01}) {
        Matrix a(n, c), b(c, c);
        for (std::size_t j = 0; j < c; ++j) {
            const double v = std::sqrt(t * (col_top - cols[j]));
            b(j, j) = v;
            for (std::size_t i = 0; i < n; ++i) a(i, j) = residual(i, j) / v;
        }
        options.push_back(extend(cert, a, b));

        Matrix a2(n, n), b2(n, c);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = std::sqrt(t * (row_top - rows[i]));
            a2(i, i) = u;
            for (std::size_t j = 0; j < c; ++j) b2(i, j) = residual(i, j) / u;
        }
        options.push_back(extend(cert, a2, b2));
    }
    std::size_t best = 0;
    double best_bound = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < options.size(); ++k) {
        const double bound = certificate_bound(options[k]);
        if (bound < best_bound) {
            best_bound = bound;
            best = k;
        }
    }
    cert = std::move(options[best]);
}

struct Iterate {
    double dual = 0.0;  // ||D_x M D_y||_S1
    Matrix polar;       // partial isometry of D_x M D_y
    FactorizationCertificate cert;
    double upper = std::numeric_limits<double>::infinity();
    std::vector<double> row_mass;  // diag (G G*)^{1/2}
    std::vector<double> col_mass;  // diag (G* G)^{1/2}
};

// Polar factor and Haagerup factorization at weights (x, y):
//   left = M D_y Z S^{-1/2},  right = S^{-1/2} W* D_x M
// where D_x M D_y = W S Z*. Neither factor divides by the weights. Tiny
// singular values are either noise (smooth, numerically low-rank kernels) or
// carry rows with tiny weight (kernels with a kink), so several truncation
// ranks are tried and the smallest repaired bound is kept.
Iterate evaluate(const Matrix& m, const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = m.rows(), c = m.cols();
    Matrix g(n, c);
    Matrix my(n, c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            my(i, j) = m(i, j) * y[j];
            g(i, j) = x[i] * my(i, j);
        }
    const auto svd = positive_svd(g, 0.0);
    Iterate it;
    for (double s : svd.sigma) it.dual += s;
    // witness from the well-resolved part only, so it stays a partial isometry
    {
        std::size_t kept = 0;
        while (kept < svd.sigma.size() && svd.sigma[kept] > 1e-13 * svd.sigma.front()) ++kept;
        Matrix w(n, kept), z(c, kept);
        for (std::size_t k = 0; k < kept; ++k) {
            for (std::size_t i = 0; i < n; ++i) w(i, k) = svd.left(i, k);
            for (std::size_t j = 0; j < c; ++j) z(j, k) = svd.right(j, k);
        }
        it.polar = w * z.adjoint();
    }
    it.row_mass.assign(n, 0.0);
    it.col_mass.assign(c, 0.0);
    for (std::size_t k = 0; k < svd.sigma.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) it.row_mass[i] += std::norm(svd.left(i, k)) * svd.sigma[k];
        for (std::size_t j = 0; j < c; ++j) it.col_mass[j] += std::norm(svd.right(j, k)) * svd.sigma[k];
    }

    const std::size_t full = svd.sigma.size();
    Matrix left = my * svd.right;
    Matrix right = svd.left.adjoint();
    for (std::size_t k = 0; k < full; ++k)
        for (std::size_t i = 0; i < n; ++i) right(k, i) *= x[i];
    right = right * m;
    for (std::size_t k = 0; k < full; ++k) {
        const double scale = 1.0 / std::sqrt(svd.sigma[k]);
        for (std::size_t i = 0; i < n; ++i) left(i, k) *= scale;
        for (std::size_t j = 0; j < c; ++j) right(k, j) *= scale;
    }

    std::size_t last_rank = full + 1;
    for (double cutoff : {0.0, 1e-14, 1e-11, 1e-8}) {
        std::size_t rank = 0;
        while (rank < full && svd.sigma[rank] > cutoff * svd.sigma.front()) ++rank;
        if (rank == last_rank) continue;
        last_rank = rank;
        FactorizationCertificate cert{Matrix(n, rank), Matrix(rank, c)};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < rank; ++k) cert.left(i, k) = left(i, k);
        for (std::size_t k = 0; k < rank; ++k)
            for (std::size_t j = 0; j < c; ++j) cert.right(k, j) = right(k, j);
        repair(cert, m);
        const double bound = certificate_bound(cert);
        if (bound < it.upper) {
            it.upper = bound;
            it.cert = std::move(cert);
        }
    }

    // balanced factorization D_x^{-1} W S^{1/2} * S^{1/2} Z* D_y^{-1}: no
    // truncation, but divides by the weights
    FactorizationCertificate balanced{Matrix(n, full), Matrix(full, c)};
    for (std::size_t k = 0; k < full; ++k) {
        const double root = std::sqrt(svd.sigma[k]);
        for (std::size_t i = 0; i < n; ++i) balanced.left(i, k) = svd.left(i, k) * root / x[i];
        for (std::size_t j = 0; j < c; ++j) balanced.right(k, j) = std::conj(svd.right(j, k)) * root / y[j];
    }
    repair(balanced, m);
    const double bound = certificate_bound(balanced);
    if (bound < it.upper) {
        it.upper = bound;
        it.cert = std::move(balanced);
    }
    return it;
}

}  // namespace

MultiplierNormResult multiplier_norm(const RealMatrix& kernel, double tol, const MultiplierOptions& options) {
    const std::size_t n = kernel.rows(), c = kernel.cols();
    if (n == 0 || c == 0) throw ShapeError("multiplier_norm: empty kernel");
    if (n > kMultiplierMaxDim || c > kMultiplierMaxDim)
        throw std::invalid_argument("multiplier_norm: kernel dimensions must be <= 64");
    if (!(tol >= 1e-6)) throw std::invalid_argument("multiplier_norm: tol must be >= 1e-6");
    const Matrix m = kernel.to_complex();

    std::vector<double> x = options.row_weights.size() == n ? options.row_weights : std::vector<double>(n, 1.0);
    std::vector<double> y = options.col_weights.size() == c ? options.col_weights : std::vector<double>(c, 1.0);
    normalize_weights(x);
    normalize_weights(y);

    MultiplierNormResult result;
    if (kernel.max_abs() == 0.0) {
        result.certificate = {Matrix(n, 0), Matrix(0, c)};
        result.witness = Matrix(n, c);
        for (std::size_t i = 0; i < std::min(n, c); ++i) result.witness(i, i) = 1.0;
        result.converged = true;
        result.row_weights = x;
        result.col_weights = y;
        return result;
    }

    Iterate best;
    double best_upper = std::numeric_limits<double>::infinity();
    FactorizationCertificate best_cert;
    std::vector<double> best_x = x, best_y = y;

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        Iterate it = evaluate(m, x, y);
        if (it.upper < best_upper) {
            best_upper = it.upper;
            best_cert = it.cert;
        }
        if (it.dual >= best.dual || best.polar.rows() == 0) {
            best = it;
            best_x = x;
            best_y = y;
        }
        if (best_upper - std::max(best.dual, kernel.max_abs()) <= tol * best_upper) break;

        // Over-relaxed multiplicative ascent on a = x^2, b = y^2:
        //   a_i <- a_i (g_i / a_i)^w,  g_i = diag((G G*)^{1/2})_i / ||G||_S1
        // where g_i / a_i is the squared row norm of the balanced factorization.
        // w = 2 can cycle between blocks; 1.5 damps that mode by half.
        for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(x[i], 1.0 - kOmega) * std::pow(it.row_mass[i], 0.5 * kOmega);
        for (std::size_t j = 0; j < c; ++j) y[j] = std::pow(y[j], 1.0 - kOmega) * std::pow(it.col_mass[j], 0.5 * kOmega);
        normalize_weights(x);
        normalize_weights(y);
    }

    result.certificate = std::move(best_cert);
    result.upper = certificate_bound(result.certificate);
    result.witness = best.polar.conj();
    result.lower = witness_ratio(kernel, result.witness);
    // a single matrix unit at the largest entry is always a witness
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (std::abs(kernel(i, j)) > std::abs(kernel(bi, bj))) bi = i, bj = j;
    if (std::abs(kernel(bi, bj)) > result.lower) {
        result.witness = Matrix(n, c);
        result.witness(bi, bj) = 1.0;
        result.lower = std::abs(kernel(bi, bj));
    }
    result.iterations = iter;
    result.converged = result.upper - result.lower <= tol * result.upper;
    result.row_weights = std::move(best_x);
    result.col_weights = std::move(best_y);
    return result;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

std::vector<double> grid_for(const ScalarFunction& f, int size, GridKind kind) {
    if (kind == GridKind::Uniform) return uniform_grid(f.domain, size);
    if (size < 2 || size % 2 != 0) throw std::invalid_argument("geometric grids have an even number of points");
    const double center = f.domain.contains(0.0) ? 0.0 : f.domain.midpoint();
    const double scale = std::min({1.0, f.domain.hi - center, center - f.domain.lo});
    return geometric_grid(size / 2 - 1, center, scale);
}

// Zero-pad a witness from a sub-grid; returns an empty matrix if not nested.
Matrix pad_witness(const std::vector<double>& coarse_pts, const Matrix& witness, const std::vector<double>& fine_pts) {
    std::vector<std::size_t> where(coarse_pts.size());
    for (std::size_t i = 0; i < coarse_pts.size(); ++i) {
        auto it = std::find(fine_pts.begin(), fine_pts.end(), coarse_pts[i]);
        if (it == fine_pts.end()) return {};
        where[i] = static_cast<std::size_t>(it - fine_pts.begin());
    }
    Matrix out(fine_pts.size(), fine_pts.size());
    for (std::size_t i = 0; i < coarse_pts.size(); ++i)
        for (std::size_t j = 0; j < coarse_pts.size(); ++j) out(where[i], where[j]) = witness(i, j);
    return out;
}

}  // namespace

std::vector<GrowthRow> ol_seminorm_sweep(const ScalarFunction& f, std::span<const int> sizes, GridKind kind,
                                         double tol) {
    std::vector<GrowthRow> rows;
    std::vector<double> prev_pts;
    MultiplierNormResult prev;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        const auto pts = grid_for(f, sizes[s], kind);
        const auto kernel = loewner_matrix(f, pts, pts);
        // Cold start: weights carried from the coarser grid are zero on the
        // new points, which traps the iteration near the old optimum.
        MultiplierNormResult res = multiplier_norm(kernel, tol);
        if (!prev_pts.empty()) {
            const Matrix padded = pad_witness(prev_pts, prev.witness, pts);
            if (padded.rows() != 0) {
                const double carried = witness_ratio(kernel.values, padded);
                if (carried > res.lower) {
                    res.lower = carried;
                    res.witness = padded;
                }
            }
        }
        GrowthRow row;
        row.k = kind == GridKind::Geometric ? sizes[s] / 2 - 1 : static_cast<int>(s);
        row.n = pts.size();
        row.lower = res.lower;
        row.upper = res.upper;
        row.iterations = res.iterations;
        row.converged = res.converged;
        rows.push_back(row);
        prev_pts = pts;
        prev = std::move(res);
    }
    return rows;
}

std::vector<double> ol_seminorm_via_grids(const ScalarFunction& f, std::span<const int> sizes, GridKind kind,
                                          double tol) {
    std::vector<double> out;
    for (const auto& row : ol_seminorm_sweep(f, sizes, kind, tol)) out.push_back(row.upper);
    return out;
}

std::vector<GrowthRow> growth_report(const ScalarFunction& f, int k_max, double tol) {
    if (k_max < 0 || k_max > 12) throw std::invalid_argument("growth_report: k_max must be in [0, 12]");
    std::vector<int> sizes;
    for (int k = 0; k <= k_max; ++k) sizes.push_back(2 * (k + 1));
    return ol_seminorm_sweep(f, sizes, GridKind::Geometric, tol);
}

std::vector<GrowthRow> abs_growth_report(int k_max, double tol) { return growth_report(find_function("abs"), k_max, tol); }

// ---------------------------------------------------------------------------
// Empirical operator-Lipschitz ratio

namespace {

constexpr double kEpsilons[] = {1.0, 1e-2, 1e-4};

struct TrialPair {
    HermitianMatrix a;
    HermitianMatrix k;  // ||k||_inf = slack, so a + eps k stays in the domain for eps <= 1
};

HermitianMatrix normalized(const HermitianMatrix& h, double target) {
    const double norm = schatten_norm(h, Schatten::Inf);
    if (norm == 0.0) return h;
    return (target / norm) * h;
}

TrialPair make_trial(const ScalarFunction& f, std::size_t n, std::uint64_t seed, int trial) {
    const Interval d = f.domain;
    const double mid = d.midpoint(), hw = 0.5 * d.width();
    std::mt19937_64 gen(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t s1 = gen(), s2 = gen();

    HermitianMatrix a, k;
    switch (trial % 3) {
        case 0: {
            const double r = hw * (0.5 + 0.45 * unit(gen));
            a = random_hermitian_in(s1, n, {mid - r, mid + r});
            k = random_hermitian(s2, n, 1.0);
            break;
        }
        case 1: {
            // rank-one push along one eigenvector of A
            const double r = 0.95 * hw;
            a = random_hermitian_in(s1, n, {mid - r, mid + r});
            const auto e = eigh(a);
            const std::size_t j = static_cast<std::size_t>(gen() % n);
            Matrix v(n, n);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q) v(p, q) = e.vectors(p, j) * std::conj(e.vectors(q, j));
            k = HermitianMatrix::symmetrized(std::move(v));
            if (unit(gen) < 0.5) k = -1.0 * k;
            break;
        }
        default: {
            // spectrum clustered geometrically around the midpoint, uniform
            // rank-one perturbation in A's eigenbasis
            std::vector<double> spectrum;
            for (std::size_t j = 0; spectrum.size() + 2 <= n; ++j) {
                const double r = 0.95 * hw * std::ldexp(1.0, -static_cast<int>(j));
                spectrum.push_back(mid - r);
                spectrum.push_back(mid + r);
            }
            if (spectrum.size() < n) spectrum.push_back(mid);
            const auto basis = eigh(random_hermitian(s1, n, 1.0)).vectors;
            Matrix diag = Matrix::diagonal(spectrum);
            a = HermitianMatrix::symmetrized(basis * diag * basis.adjoint());
            Matrix ones(n, n);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q) ones(p, q) = 1.0 / static_cast<double>(n);
            k = HermitianMatrix::symmetrized(basis * ones * basis.adjoint());
            break;
        }
    }
    double reach = 0.0;
    for (double l : eigh(a).eigenvalues) reach = std::max(reach, std::abs(l - mid));
    const double slack = std::max(0.0, 0.999 * hw - reach);
    return {std::move(a), normalized(k, slack)};
}

}  // namespace

EmpiricalOlResult ol_seminorm_empirical_detail(const ScalarFunction& f, std::size_t n, int trials, std::uint64_t seed,
                                               unsigned threads) {
    if (trials < 1) throw std::invalid_argument("ol_seminorm_empirical: trials must be >= 1");
    if (n < 1) throw std::invalid_argument("ol_seminorm_empirical: n must be >= 1");
    constexpr std::size_t kEps = std::size(kEpsilons);
    std::vector<double> ratios(static_cast<std::size_t>(trials) * kEps, 0.0);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const TrialPair pair = make_trial(f, n, seed, static_cast<int>(t));
        const auto ea = eigh(pair.a);
        const HermitianMatrix fa = apply_function(f, ea);
        for (std::size_t e = 0; e < kEps; ++e) {
            const HermitianMatrix b = pair.a + kEpsilons[e] * pair.k;
            const double denom = schatten_norm(pair.a - b, Schatten::One);
            if (denom == 0.0) continue;
            ratios[t * kEps + e] = schatten_norm(fa - apply_function(f, b), Schatten::One) / denom;
        }
    });
    EmpiricalOlResult out;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (ratios[i] > out.max_ratio) {
            out.max_ratio = ratios[i];
            out.worst_trial = static_cast<int>(i / kEps);
            out.worst_eps = kEpsilons[i % kEps];
        }
    }
    return out;
}

double ol_seminorm_empirical(const ScalarFunction& f, std::size_t n, int trials, std::uint64_t seed,
                             unsigned threads) {
    return ol_seminorm_empirical_detail(f, n, trials, seed, threads).max_ratio;
}

}  // namespace krein

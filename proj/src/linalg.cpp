#include "krein/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "krein/simd/kernels.hpp"

namespace krein {

// ---------------------------------------------------------------------------
// Matrix

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::conj() const {
    Matrix out(*this);
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double Matrix::frobenius() const { return std::sqrt(simd::kernels().sum_sq_abs(data_.size(), data_.data())); }

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix sum: shape mismatch");
    simd::kernels().caxpy(data_.size(), 1.0, other.data_.data(), data_.data());
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix difference: shape mismatch");
    simd::kernels().caxpy(data_.size(), -1.0, other.data_.data(), data_.data());
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
    const auto& k = simd::kernels();
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx* crow = c.row(i).data();
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const cplx alpha = a(i, l);
            if (alpha == cplx{}) continue;
            k.caxpy(b.cols(), alpha, b.row(l).data(), crow);
        }
    }
    return c;
}

double RealMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix RealMatrix::to_complex() const {
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

Matrix hadamard(const RealMatrix& kernel, const Matrix& m) {
    if (kernel.rows() != m.rows() || kernel.cols() != m.cols()) throw ShapeError("hadamard: shape mismatch");
    Matrix out(m.rows(), m.cols());
    simd::kernels().scale_real(m.data().size(), kernel.data().data(), m.data().data(), out.data().data());
    return out;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

namespace {

Matrix symmetrize(Matrix m) {
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
    return m;
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix m) {
    if (!m.square()) throw ShapeError("Hermitian matrix must be square");
    const std::size_t n = m.rows();
    double deviation = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) deviation = std::max(deviation, std::abs(m(i, j) - std::conj(m(j, i))));
    if (deviation > 1e-12 * m.max_abs()) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian (max |H - H*| = " << deviation << ")";
        throw std::invalid_argument(msg.str());
    }
    m_ = symmetrize(std::move(m));
}

HermitianMatrix::HermitianMatrix(Matrix m, Trusted) : m_(symmetrize(std::move(m))) {}

HermitianMatrix HermitianMatrix::symmetrized(Matrix m) {
    if (!m.square()) throw ShapeError("Hermitian matrix must be square");
    return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) { return symmetrized(Matrix::diagonal(d)); }

HermitianMatrix HermitianMatrix::zero(std::size_t n) { return symmetrized(Matrix(n, n)); }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
    m_ += other.m_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
    m_ -= other.m_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
    m_ *= s;
    return *this;
}

HermitianMatrix HermitianMatrix::shifted(double t) const {
    Matrix m = m_;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= t;
    return HermitianMatrix(std::move(m), Trusted{});
}

// ---------------------------------------------------------------------------
// Eigendecomposition

Matrix EigenDecomposition::reconstruct() const {
    Matrix scaled = vectors;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= eigenvalues[j];
    return scaled * vectors.adjoint();
}

EigenDecomposition eigh(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    const auto& k = simd::kernels();
    Matrix a = h.matrix();
    // Rows of vt are the conjugate-free transposed eigenvector columns: V = vt^T.
    Matrix vt = Matrix::identity(n);

    const double scale = a.frobenius();
    const double threshold = 1e-14 * scale;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    while (scale > 0.0 && off_norm() > threshold) {
        if (++sweep > kJacobiMaxSweeps) throw ConvergenceError("eigh: Jacobi did not converge within the sweep limit");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0 || r < 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // phase e^{i phi} = apq / r makes the pivot real, then a real rotation
                const cplx phase = apq / r;
                const double theta = (aqq - app) / (2.0 * r);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // rows of J* A: p <- c p - s e^{i phi} q ; q <- s p + c e^{i phi} q
                k.rotate(n, a.row(p).data(), a.row(q).data(), c, -s * phase, s, c * phase);
                // columns follow from Hermitian symmetry of J* A J
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == p || l == q) continue;
                    a(l, p) = std::conj(a(p, l));
                    a(l, q) = std::conj(a(q, l));
                }
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                // V <- V J, as row operations on V^T
                const cplx phase_conj = std::conj(phase);
                k.rotate(n, vt.row(p).data(), vt.row(q).data(), c, -s * phase_conj, s, c * phase_conj);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = a(src, src).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vt(src, i);
    }
    return out;
}

HermitianMatrix apply_function(const ScalarFunction& f, const EigenDecomposition& e) {
    std::vector<double> values(e.dim());
    for (std::size_t j = 0; j < e.dim(); ++j) {
        const double lambda = e.eigenvalues[j];
        if (!f.domain.contains(lambda)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "eigenvalue " << lambda << " outside the domain [" << f.domain.lo << ", " << f.domain.hi
                << "] of " << f.name;
            throw DomainError(msg.str(), lambda);
        }
        values[j] = f(lambda);
    }
    Matrix scaled = e.vectors;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= values[j];
    return HermitianMatrix::symmetrized(scaled * e.vectors.adjoint());
}

HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& h) {
    return apply_function(f, eigh(h));
}

// ---------------------------------------------------------------------------
// Singular values and norms

namespace {

HermitianMatrix dilation(const Matrix& t) {
    const std::size_t r = t.rows(), c = t.cols();
    Matrix d(r + c, r + c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            d(i, r + j) = t(i, j);
            d(r + j, i) = std::conj(t(i, j));
        }
    return HermitianMatrix::symmetrized(std::move(d));
}

}  // namespace

std::vector<double> singular_values(const Matrix& t) {
    const std::size_t k = std::min(t.rows(), t.cols());
    if (k == 0) return {};
    const auto e = eigh(dilation(t));
    std::vector<double> sigma(k);
    const std::size_t total = e.dim();
    for (std::size_t i = 0; i < k; ++i) sigma[i] = std::max(0.0, e.eigenvalues[total - 1 - i]);
    return sigma;
}

namespace {

// One-sided (Hestenes) Jacobi on the columns of t, stored as rows of x so
// each rotation is a row operation. Small singular values keep relative
// accuracy, which the dilation route does not give.
SingularTriplets hestenes_svd(const Matrix& t, double rel_cutoff) {
    const std::size_t r = t.rows(), c = t.cols();
    Matrix x = t.transpose();
    Matrix v = Matrix::identity(c);  // row j is column j of V
    const auto& kern = simd::kernels();

    auto dot = [&](std::size_t p, std::size_t q) {
        cplx s = 0.0;
        const cplx* xp = x.row(p).data();
        const cplx* xq = x.row(q).data();
        for (std::size_t i = 0; i < r; ++i) s += std::conj(xp[i]) * xq[i];
        return s;
    };

    const double threshold = static_cast<double>(std::max<std::size_t>(r, 4)) * std::numeric_limits<double>::epsilon();
    // columns this small only carry singular values below any cutoff we use
    const double negligible = 1e-16 * t.frobenius();
    int sweep = 0;
    for (bool rotated = true; rotated; ++sweep) {
        if (sweep == kJacobiMaxSweeps)
            throw ConvergenceError("positive_svd: one-sided Jacobi did not converge in " +
                                   std::to_string(kJacobiMaxSweeps) + " sweeps");
        rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p)
            for (std::size_t q = p + 1; q < c; ++q) {
                const double a = kern.sum_sq_abs(r, x.row(p).data());
                const double b = kern.sum_sq_abs(r, x.row(q).data());
                const cplx g = dot(p, q);
                const double ag = std::abs(g);
                if (std::sqrt(a) <= negligible || std::sqrt(b) <= negligible || !(ag > threshold * std::sqrt(a) * std::sqrt(b))) continue;
                rotated = true;
                const cplx phase = std::conj(g) / ag;
                const double zeta = (b - a) / (2.0 * ag);
                const double tt = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + tt * tt);
                const double sn = cs * tt;
                kern.rotate(r, x.row(p).data(), x.row(q).data(), cs, -sn * phase, sn, cs * phase);
                kern.rotate(c, v.row(p).data(), v.row(q).data(), cs, -sn * phase, sn, cs * phase);
            }
    }

    std::vector<double> sigma(c);
    for (std::size_t j = 0; j < c; ++j) sigma[j] = std::sqrt(kern.sum_sq_abs(r, x.row(j).data()));
    std::vector<std::size_t> order(c);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });
    const double smax = c == 0 ? 0.0 : sigma[order.front()];

    SingularTriplets out;
    for (std::size_t j : order)
        if (sigma[j] > 0.0 && sigma[j] > rel_cutoff * smax) out.sigma.push_back(sigma[j]);
    const std::size_t k = out.sigma.size();
    out.left = Matrix(r, k);
    out.right = Matrix(c, k);
    for (std::size_t col = 0; col < k; ++col) {
        const std::size_t j = order[col];
        for (std::size_t i = 0; i < r; ++i) out.left(i, col) = x(j, i) / sigma[j];
        for (std::size_t i = 0; i < c; ++i) out.right(i, col) = v(j, i);
    }
    return out;
}

}  // namespace

SingularTriplets positive_svd(const Matrix& t, double rel_cutoff) {
    if (t.rows() >= t.cols()) return hestenes_svd(t, rel_cutoff);
    // t* = W S V*  =>  t = V S W*
    SingularTriplets s = hestenes_svd(t.adjoint(), rel_cutoff);
    std::swap(s.left, s.right);
    return s;
}

double schatten_norm(const Matrix& t, Schatten p) {
    const double s2 = t.frobenius();
    if (p == Schatten::Two) return s2;
    const auto sigma = singular_values(t);
    if (p == Schatten::Inf) {
        const double s = sigma.empty() ? 0.0 : sigma.front();
        // singular values and the entrywise sum round differently
        return std::min(s, s2);
    }
    double s1 = 0.0;
    for (double s : sigma) s1 += s;
    return std::max(s1, s2);
}

cplx trace(const Matrix& t) {
    if (!t.square()) throw ShapeError("trace of a non-square matrix");
    cplx s = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) s += t(i, i);
    return s;
}

// ---------------------------------------------------------------------------
// Random operators

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return splitmix(splitmix(master) ^ (index * 0xd1342543de82ef95ULL + 1));
}

HermitianMatrix random_hermitian(std::uint64_t seed, std::size_t n, double scale) {
    std::mt19937_64 gen(mix_seed(seed, n));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double off = scale / std::sqrt(2.0);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = scale * normal(gen);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double re = normal(gen);
            const double im = normal(gen);
            m(i, j) = cplx(off * re, off * im);
            m(j, i) = std::conj(m(i, j));
        }
    }
    return HermitianMatrix::symmetrized(std::move(m));
}

HermitianMatrix random_hermitian_in(std::uint64_t seed, std::size_t n, Interval spectrum) {
    HermitianMatrix h = random_hermitian(seed, n, 1.0);
    const auto e = eigh(h);
    double radius = 0.0;
    for (double l : e.eigenvalues) radius = std::max(radius, std::abs(l));
    const double target = 0.5 * spectrum.width() * (1.0 - 1e-9);
    Matrix m = h.matrix();
    m *= (radius > 0.0 ? target / radius : 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += spectrum.midpoint();
    return HermitianMatrix::symmetrized(std::move(m));
}

}  // namespace krein

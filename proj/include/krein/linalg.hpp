#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "krein/errors.hpp"
#include "krein/scalar_function.hpp"

namespace krein {

using cplx = std::complex<double>;

// Dense row-major complex matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    Matrix transpose() const;
    Matrix adjoint() const;
    Matrix conj() const;
    double max_abs() const;
    double frobenius() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(cplx s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// Real dense matrix, row-major. Used for sampled kernels.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const { return data_; }
    double max_abs() const;
    Matrix to_complex() const;

    bool operator==(const RealMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Entrywise product of a real kernel with a complex matrix of the same shape.
Matrix hadamard(const RealMatrix& kernel, const Matrix& m);

// Self-adjoint matrix. Construction rejects input whose deviation from
// Hermitian symmetry exceeds 1e-12 * max|entry|, then symmetrizes exactly.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(Matrix m);

    // Symmetrizes without the deviation check; for results of operations that
    // are Hermitian in exact arithmetic.
    static HermitianMatrix symmetrized(Matrix m);
    static HermitianMatrix diagonal(std::span<const double> d);
    static HermitianMatrix zero(std::size_t n);

    std::size_t dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    HermitianMatrix& operator+=(const HermitianMatrix& other);
    HermitianMatrix& operator-=(const HermitianMatrix& other);
    HermitianMatrix& operator*=(double s);
    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

    // H - t I
    HermitianMatrix shifted(double t) const;

    bool operator==(const HermitianMatrix& other) const = default;

private:
    struct Trusted {};
    HermitianMatrix(Matrix m, Trusted);
    Matrix m_;
};

// Spectral data: ascending eigenvalues, orthonormal eigenvector columns.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix vectors;

    std::size_t dim() const { return eigenvalues.size(); }
    Matrix reconstruct() const;
};

inline constexpr int kJacobiMaxSweeps = 100;

// Cyclic Jacobi. Throws ConvergenceError past kJacobiMaxSweeps.
EigenDecomposition eigh(const HermitianMatrix& h);

// V f(Lambda) V*; throws DomainError naming an eigenvalue outside f's domain.
HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& h);
HermitianMatrix apply_function(const ScalarFunction& f, const EigenDecomposition& e);

enum class Schatten { One, Two, Inf };

// Singular values, descending, via the Hermitian dilation [[0, T], [T*, 0]].
std::vector<double> singular_values(const Matrix& t);

double schatten_norm(const Matrix& t, Schatten p);
inline double schatten_norm(const HermitianMatrix& h, Schatten p) { return schatten_norm(h.matrix(), p); }

// Thin SVD restricted to singular values above rel_cutoff * sigma_max:
// t ~= left * diag(sigma) * right^*.
struct SingularTriplets {
    std::vector<double> sigma;
    Matrix left;   // rows(t) x r
    Matrix right;  // cols(t) x r
};
SingularTriplets positive_svd(const Matrix& t, double rel_cutoff = 1e-14);

cplx trace(const Matrix& t);
inline cplx trace(const HermitianMatrix& h) { return trace(h.matrix()); }

// GUE-style sample: real N(0, scale^2) diagonal, complex off-diagonal entries
// with E|h_ij|^2 = scale^2. Deterministic per (seed, n, scale).
HermitianMatrix random_hermitian(std::uint64_t seed, std::size_t n, double scale);

// A random_hermitian sample shifted and rescaled so its spectrum fills
// [mid - r, mid + r] at the extreme eigenvalue, with mid, r from `spectrum`.
HermitianMatrix random_hermitian_in(std::uint64_t seed, std::size_t n, Interval spectrum);

// Deterministic stream derivation used for seeded campaigns.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// Shared matrix file format: {"n": int, "re": [[...]], "im": [[...]]}, with an
// optional "m" for non-square data. Doubles are written with 17 significant digits.
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

}  // namespace krein

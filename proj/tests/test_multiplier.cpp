#include <doctest.h>

#include <cmath>

#include "krein/doi.hpp"
#include "krein/funcat.hpp"
#include "krein/multiplier.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace krein;

namespace {

constexpr double kTol = 1e-6;

double independent_bound(const FactorizationCertificate& cert) {
    double rows = 0.0, cols = 0.0;
    for (std::size_t i = 0; i < cert.left.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < cert.left.cols(); ++k) s += std::norm(cert.left(i, k));
        rows = std::max(rows, s);
    }
    for (std::size_t j = 0; j < cert.right.cols(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < cert.right.rows(); ++k) s += std::norm(cert.right(k, j));
        cols = std::max(cols, s);
    }
    return std::sqrt(rows) * std::sqrt(cols);
}

void check_result(const RealMatrix& m, const MultiplierNormResult& r) {
    CHECK(r.converged);
    CHECK(r.lower <= r.upper);
    CHECK(r.upper - r.lower <= kTol * r.upper);
    CHECK((r.certificate.reproduce() - m.to_complex()).max_abs() <= 1e-8);
    CHECK(certificate_bound(r.certificate) >= r.upper - kTol);
    CHECK(independent_bound(r.certificate) <= r.upper * (1.0 + 1e-12));
    // the witness ratio, recomputed here from the returned witness
    const double ratio = schatten_norm(hadamard(m, r.witness), Schatten::Inf) / schatten_norm(r.witness, Schatten::Inf);
    CHECK(ratio == doctest::Approx(r.lower).epsilon(1e-10));
}

RealMatrix principal(const RealMatrix& m, std::size_t k) {
    RealMatrix s(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) s(i, j) = m(i, j);
    return s;
}

}  // namespace

TEST_SUITE("multiplier") {
    TEST_CASE("brute-force oracle for the 2x2 upper-triangular kernel") {
        RealMatrix jordan(2, 2, 1.0);
        jordan(1, 0) = 0.0;
        const double oracle = testing::brute_force_norm_2x2(jordan);
        CHECK(oracle == doctest::Approx(1.154701).epsilon(1e-6));
        const auto r = multiplier_norm(jordan, kTol);
        check_result(jordan, r);
        CHECK(std::abs(r.upper - oracle) <= 1e-4);
        CHECK(std::abs(certificate_bound(r.certificate) - 1.154701) <= 1e-4);
    }

    TEST_CASE("random 2x2 kernels against the brute-force oracle") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const RealMatrix m = testing::random_real(700 + s, 2, 2);
            const auto r = multiplier_norm(m, kTol);
            check_result(m, r);
            CHECK(r.upper == doctest::Approx(testing::brute_force_norm_2x2(m)).epsilon(1e-5));
        }
    }

    TEST_CASE("all-ones and identity-pattern kernels have norm one") {
        for (std::size_t n : {1u, 2u, 5u, 9u, 16u}) {
            const RealMatrix ones(n, n, 1.0);
            const auto r = multiplier_norm(ones, kTol);
            check_result(ones, r);
            CHECK(std::abs(r.upper - 1.0) <= 1e-6);

            RealMatrix eye(n, n);
            for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
            const auto e = multiplier_norm(eye, kTol);
            check_result(eye, e);
            CHECK(std::abs(e.upper - 1.0) <= 1e-6);
            const std::vector<double> pts(n, 0.0);
            for (double v : diagonal_trace(e.certificate, pts)) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
        }
    }

    TEST_CASE("certificate bound examples") {
        const std::size_t n = 4;
        FactorizationCertificate ones{Matrix(n, 1), Matrix(1, n)};
        for (std::size_t i = 0; i < n; ++i) ones.left(i, 0) = ones.right(0, i) = 1.0;
        CHECK(certificate_bound(ones) == doctest::Approx(1.0).epsilon(1e-14));
        const std::vector<double> pts{0.0, 1.0, 2.0, 3.0};
        for (double v : diagonal_trace(ones, pts)) CHECK(v == 1.0);

        const FactorizationCertificate eye{Matrix::identity(n), Matrix::identity(n)};
        CHECK(certificate_bound(eye) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK_THROWS_AS(diagonal_trace(eye, std::vector<double>{0.0, 1.0}), ShapeError);
    }

    TEST_CASE("diagonal trace of the x^2 loewner certificate is f'") {
        const std::vector<double> pts{0.0, 1.0, 2.0};
        const auto k = loewner_matrix(find_function("x2"), pts, pts);
        const auto r = multiplier_norm(k, kTol);
        check_result(k.values, r);
        const auto d = diagonal_trace(r.certificate, pts);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(d[i] - 2.0 * pts[i]) <= 1e-6);
    }

    TEST_CASE("sandwich, certificate and witness on random kernels") {
        for (std::uint64_t s = 0; s < 40; ++s) {
            const std::size_t n = 1 + s % 8, m = 1 + (s / 3) % 8;
            const RealMatrix k = testing::random_real(800 + s, n, m);
            check_result(k, multiplier_norm(k, kTol));
        }
    }

    TEST_CASE("scaling") {
        const RealMatrix m = testing::random_real(901, 6, 6);
        const double base = multiplier_norm(m, kTol).upper;
        for (double c : {-2.5, 0.1, 7.0}) {
            RealMatrix cm = m;
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) cm(i, j) *= c;
            const auto r = multiplier_norm(cm, kTol);
            check_result(cm, r);
            CHECK(std::abs(r.upper - std::abs(c) * base) <= 2.0 * kTol * std::abs(c) * base);
        }
    }

    TEST_CASE("principal submatrices have smaller norm") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const RealMatrix m = testing::random_real(950 + s, 8, 8);
            const auto full = multiplier_norm(m, kTol);
            for (std::size_t k = 1; k < 8; ++k) CHECK(multiplier_norm(principal(m, k), kTol).lower <= full.upper);
        }
    }

    TEST_CASE("diagonal trace agrees with the trace of the doi") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const std::size_t n = 2 + s % 6;
            const auto e = eigh(random_hermitian_in(1200 + s, n, {-1.8, 1.8}));
            const auto k = loewner_matrix(find_function("sin"), e.eigenvalues, e.eigenvalues);
            const auto r = multiplier_norm(k, kTol);
            const auto d = diagonal_trace(r.certificate, e.eigenvalues);
            const Matrix t = testing::random_matrix(1300 + s, n, n);
            const Matrix tu = e.vectors.adjoint() * t * e.vectors;
            cplx via_cert = 0.0;
            for (std::size_t i = 0; i < n; ++i) via_cert += d[i] * tu(i, i);
            CHECK(std::abs(via_cert - trace(doi(k, e, t, e))) <= 1e-6);
        }
    }

    TEST_CASE("grid sweeps") {
        const std::vector<int> sizes{3, 5, 9, 17};
        for (double v : ol_seminorm_via_grids(find_function("identity"), sizes))
            CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

        const auto sq = ol_seminorm_sweep(find_function("x2"), sizes, GridKind::Uniform);
        for (std::size_t i = 0; i < sq.size(); ++i) {
            CHECK(sq[i].converged);
            CHECK(sq[i].upper <= 4.0 * 2.0);
            if (i > 0) CHECK(sq[i].lower >= sq[i - 1].lower);
        }

        const auto abs_rows = abs_growth_report(6);
        CHECK(abs_rows.front().lower == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t k = 1; k < abs_rows.size(); ++k) {
            CHECK(abs_rows[k].n == 2 * (k + 1));
            CHECK(abs_rows[k].lower > abs_rows[k - 1].lower);
            CHECK(abs_rows[k].lower <= abs_rows[k].upper);
        }
    }

    TEST_CASE("empirical OL ratios") {
        // 1 up to cancellation in f(A) - f(A + eps K) at eps = 1e-4
        CHECK(std::abs(ol_seminorm_empirical(find_function("identity"), 6, 30, 4) - 1.0) <= 1e-8);
        const double sq = ol_seminorm_empirical(find_function("x2"), 8, 200, 1);
        CHECK(sq <= 4.0 + 1e-6);
        CHECK(sq >= 3.5);
        const auto abs = find_function("abs");
        CHECK(ol_seminorm_empirical(abs, 32, 30, 2) > ol_seminorm_empirical(abs, 4, 30, 2));
    }

    TEST_CASE("empirical ratio is independent of the thread count") {
        const auto f = find_function("abs");
        CHECK(ol_seminorm_empirical(f, 8, 24, 5, 1) == ol_seminorm_empirical(f, 8, 24, 5, 8));
    }

    TEST_CASE("oversized kernels are rejected") {
        CHECK_THROWS_AS(multiplier_norm(RealMatrix(kMultiplierMaxDim + 1, 2, 1.0), kTol), std::invalid_argument);
    }
}

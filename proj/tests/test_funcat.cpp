#include <doctest.h>

#include <cmath>
#include <numbers>

#include "krein/errors.hpp"
#include "krein/funcat.hpp"
#include "krein/quadrature.hpp"

using namespace krein;

TEST_SUITE("funcat") {
    TEST_CASE("divided difference examples") {
        CHECK(divided_difference(find_function("x2").with_domain({-4.0, 4.0}), 2.0, 3.0) == doctest::Approx(5.0).epsilon(1e-15));
        CHECK(divided_difference(find_function("sin"), 0.0, 0.0) == 1.0);
        CHECK(divided_difference(find_function("abs"), 1.0, -1.0) == 0.0);
        CHECK(divided_difference(find_function("abs"), 0.0, 0.0) == 0.0);
        CHECK(divided_difference(find_function("x2sin1x"), 0.0, 0.0) == 0.0);
        CHECK_THROWS_AS(divided_difference(find_function("sin"), 0.0, 5.0), DomainError);
    }

    TEST_CASE("divided difference is symmetric") {
        for (const auto& f : catalog()) {
            for (double x : {-1.9, -0.3, 0.0, 0.7, 1.5})
                for (double y : {-1.2, 0.0, 0.25, 1.9}) CHECK(divided_difference(f, x, y) == divided_difference(f, y, x));
        }
    }

    TEST_CASE("divided difference of powers") {
        for (int k = 1; k <= 6; ++k) {
            std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
            c.back() = 1.0;
            const auto f = make_polynomial(c).with_domain({-2.0, 2.0});
            for (double x : {-1.5, -0.2, 0.9})
                for (double y : {-1.1, 0.4, 1.8}) {
                    double s = 0.0;
                    for (int j = 0; j < k; ++j) s += std::pow(x, j) * std::pow(y, k - 1 - j);
                    CHECK(std::abs(divided_difference(f, x, y) - s) <= 1e-10);
                }
        }
    }

    TEST_CASE("loewner matrix examples") {
        const std::vector<double> pts{0.0, 1.0, 2.0};
        const auto k = loewner_matrix(find_function("x2"), pts, pts);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(k.values(i, j) == doctest::Approx(pts[i] + pts[j]));

        const auto ones = loewner_matrix(find_function("identity"), pts, pts);
        for (double v : ones.values.data()) CHECK(v == 1.0);

        const std::vector<double> pm{-1.0, 1.0};
        const auto a = loewner_matrix(find_function("abs"), pm, pm);
        CHECK(a.values(0, 0) == -1.0);
        CHECK(a.values(0, 1) == 0.0);
        CHECK(a.values(1, 0) == 0.0);
        CHECK(a.values(1, 1) == 1.0);
    }

    TEST_CASE("loewner matrix on a shared grid is symmetric") {
        const auto grid = uniform_grid({-2.0, 2.0}, 9);
        for (const auto& f : catalog()) {
            const auto k = loewner_matrix(f, grid, grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                for (std::size_t j = 0; j < grid.size(); ++j) CHECK(k.values(i, j) == k.values(j, i));
        }
    }

    TEST_CASE("lipschitz estimates") {
        CHECK(lipschitz_seminorm_estimate(find_function("identity").with_domain({-1.0, 1.0}), 101) ==
              doctest::Approx(1.0).epsilon(1e-14));
        const auto sine = find_function("sin").with_domain({-std::numbers::pi, std::numbers::pi});
        CHECK(std::abs(lipschitz_seminorm_estimate(sine, 1001) - 1.0) <= 1e-4);
        const auto sq = find_function("x2").with_domain({0.0, 2.0});
        CHECK(std::abs(lipschitz_seminorm_estimate(sq, 1001) - 4.0) <= 1e-2);
    }

    TEST_CASE("divided differences stay below the refined lipschitz estimate") {
        const auto probe = uniform_grid({-2.0, 2.0}, 157);
        for (const auto& f : catalog()) {
            CAPTURE(f.name);
            const double lip = lipschitz_seminorm_refined(f);
            double worst = 0.0;
            for (double x : probe)
                for (double y : probe) worst = std::max(worst, std::abs(divided_difference(f, x, y)));
            CHECK(worst <= lip + 1e-6);
        }
    }

    TEST_CASE("catalog metadata") {
        CHECK(find_function("abs").ol_status == OlStatus::KnownNotOL);
        CHECK(find_function("x2sin1x").ol_status == OlStatus::KnownOL);
        CHECK(find_function("identity").lipschitz_bound.value() == 1.0);
        CHECK(find_function("bump").smoothness == 2);
        CHECK_THROWS_AS(find_function("nope"), std::invalid_argument);
        CHECK(find_function("poly:[1,0,2]")(3.0) == 19.0);
        CHECK_THROWS_AS(find_function("poly:[1,"), std::invalid_argument);
    }

    TEST_CASE("grids") {
        const auto g = geometric_grid(2);
        CHECK(g == std::vector<double>{-1.0, -0.5, -0.25, 0.25, 0.5, 1.0});
        const auto u = uniform_grid({0.0, 1.0}, 5);
        CHECK(u == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    }
}

TEST_SUITE("funcat") {
    TEST_CASE("gauss-legendre is exact to degree 2n-1") {
        for (int n : {1, 2, 3, 8, 16, 32, 64}) {
            const int deg = 2 * n - 1;
            // int_0^1 x^deg = 1 / (deg + 1)
            const double v = integrate([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0, n);
            CHECK(v == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
            double wsum = 0.0;
            for (double w : gauss_legendre(n).weights) wsum += w;
            CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        }
    }

    TEST_CASE("gauss-legendre on a smooth integrand") {
        CHECK(integrate([](double x) { return std::cos(x); }, 0.0, 1.0, 16) ==
              doctest::Approx(std::sin(1.0)).epsilon(1e-15));
        CHECK_THROWS(gauss_legendre(0));
    }
}

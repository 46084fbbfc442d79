#pragma once

#include <span>
#include <string>
#include <vector>

#include "krein/linalg.hpp"
#include "krein/scalar_function.hpp"

namespace krein {

// A bivariate kernel sampled on xs x ys.
struct KernelMatrix {
    std::vector<double> xs;
    std::vector<double> ys;
    RealMatrix values;

    std::size_t rows() const { return xs.size(); }
    std::size_t cols() const { return ys.size(); }
};

// (f(x) - f(y)) / (x - y) off the diagonal; f'(x) on it, or the function's
// diagonal convention at an exceptional point.
double divided_difference(const ScalarFunction& f, double x, double y);

KernelMatrix loewner_matrix(const ScalarFunction& f, std::span<const double> xs, std::span<const double> ys);

// Max |divided difference| over all pairs of a uniform grid (diagonal
// included). A lower bound for the Lipschitz seminorm on the domain.
double lipschitz_seminorm_estimate(const ScalarFunction& f, int grid_size);

// Grid estimate at `grid_size` plus the change observed when the grid is
// roughly halved; an upper-leaning value for bound checks.
double lipschitz_seminorm_refined(const ScalarFunction& f, int grid_size = 4001);

const std::vector<ScalarFunction>& catalog();

// Catalog name, or "poly:[c0,c1,...]" for sum c_k x^k.
ScalarFunction find_function(const std::string& text);

ScalarFunction make_polynomial(std::vector<double> coeffs);

std::vector<double> uniform_grid(Interval domain, int points);

// {+-scale * 2^-j : 0 <= j <= k} sorted ascending around `center`.
std::vector<double> geometric_grid(int k, double center = 0.0, double scale = 1.0);

}  // namespace krein

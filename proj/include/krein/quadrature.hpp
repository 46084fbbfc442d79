#pragma once

#include <functional>
#include <vector>

namespace krein {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1.
const GaussRule& gauss_legendre(int n);

double integrate(const std::function<double(double)>& g, double a, double b, int nodes);

}  // namespace krein

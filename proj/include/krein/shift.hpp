#pragma once

#include <span>
#include <vector>

#include "krein/funcat.hpp"
#include "krein/linalg.hpp"

namespace krein {

// Compactly supported piecewise-constant function. values[0] and
// values.back() are the (zero) tails; values[i] for 0 < i < values.size() - 1
// holds on (breakpoints[i - 1], breakpoints[i]). Right-continuous.
struct StepFunction {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double operator()(double s) const;
    double integral() const;
    // (1 / (b - a)) * int_a^b
    double mean(double a, double b) const;
    StepFunction negated() const;
};

// xi(s) = #{a_j > s} - #{b_j > s}, so that trace(f(A) - f(B)) = int f' xi.
StepFunction xi_from_eigs(std::span<const double> eigs_a, std::span<const double> eigs_b);

// sum over intervals of xi * (Gauss-Legendre integral of f'); never uses
// differences of f.
double trace_formula_rhs(const ScalarFunction& f, const StepFunction& xi, int nodes_per_interval);

struct TraceFormulaReport {
    double lhs = 0.0;       // Re trace(f(A) - f(B))
    double lhs_imag = 0.0;
    double rhs = 0.0;       // int f' xi
    double abs_error = 0.0;
};
TraceFormulaReport trace_formula_check(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                       int nodes);

struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

struct AtomicSignedMeasure {
    std::vector<Atom> atoms;

    double total_weight() const;
    double total_variation() const;
};

// nu_t(Delta) = trace(E_t(Delta) K) for A_t = A + tK: atoms at the eigenvalues
// of A_t with weights <phi_j, K phi_j>.
AtomicSignedMeasure nu_t(const HermitianMatrix& a, const HermitianMatrix& k, double t);

struct HellmannFeynmanReport {
    double max_error = 0.0;
    double min_gap = 0.0;
    bool skipped = false;  // spectral gap too small for sorted-order tracking
};
HellmannFeynmanReport hellmann_feynman_check(const HermitianMatrix& a, const HermitianMatrix& k, double t, double h);

struct DensityEstimate {
    std::vector<double> bin_edges;
    std::vector<double> densities;

    std::size_t bins() const { return densities.size(); }
    double total_mass() const;
};

// Binned midpoint-rule estimate of nu = int_0^1 nu_t dt with 2^depth values
// of t, over the spectral hull of A and A + K padded by ||K||_inf.
DensityEstimate nu_integrated(const HermitianMatrix& a, const HermitianMatrix& k, int depth, int bins,
                              unsigned threads = 1);

struct NuXiReport {
    double l1_error = 0.0;
    double k_s1 = 0.0;
    DensityEstimate density;
    std::vector<double> minus_xi_mean;  // per bin
};
// Compares the density of nu with -xi for K = B - A.
NuXiReport nu_vs_xi_check(const HermitianMatrix& a, const HermitianMatrix& b, int depth, int bins,
                          unsigned threads = 1);

struct TranslationScan {
    std::vector<double> t;
    std::vector<double> values;      // trace(f(A - tI) - f(B - tI))
    std::vector<double> quadrature;  // int f'(x - t) xi(x) dx
    double max_crosscheck_error = 0.0;
};
TranslationScan translation_scan(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                 std::span<const double> t_grid, int nodes = 32);

}  // namespace krein

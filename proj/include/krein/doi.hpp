#pragma once

#include <optional>

#include "krein/funcat.hpp"
#include "krein/linalg.hpp"

namespace krein {

// Double operator integral in finite dimension:
//   U (Phi o (U* T V)) V*
// with U, V the eigenvector matrices of ea, eb and Phi sampled at
// (ea.eigenvalues, eb.eigenvalues).
Matrix doi(const KernelMatrix& phi, const EigenDecomposition& ea, const Matrix& t, const EigenDecomposition& eb);

// f(A) - f(B)
HermitianMatrix delta_f(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& b);

struct DoiRepresentationReport {
    Matrix lhs;  // f(A) - f(B)
    Matrix rhs;  // DOI of the Loewner kernel applied to A - B
    double error_s2 = 0.0;
    double error_s1 = 0.0;

    // ||f(A) - f(B)||_S2 <= ||f||_Li ||A - B||_S2
    double delta_s2 = 0.0;
    double perturbation_s2 = 0.0;
    double lipschitz = 0.0;

    // ||f(A) - f(B)||_S1 <= ||f||_OL ||A - B||_S1, when an OL estimate is supplied
    double delta_s1 = 0.0;
    double perturbation_s1 = 0.0;
    std::optional<double> ol_seminorm;

    bool s2_bound_holds(double rel_slack = 1e-6) const {
        return delta_s2 <= lipschitz * perturbation_s2 * (1.0 + rel_slack);
    }
};

// `lipschitz` defaults to the refined grid estimate of f on its domain.
DoiRepresentationReport doi_representation_check(const ScalarFunction& f, const HermitianMatrix& a,
                                                 const HermitianMatrix& b,
                                                 std::optional<double> lipschitz = std::nullopt,
                                                 std::optional<double> ol_seminorm = std::nullopt);

// Q_t = d/ds f(A + sK) at s = t, as the DOI of the Loewner kernel on the
// spectrum of A_t applied to K.
HermitianMatrix derivative_q(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& k, double t);

struct HsDerivativeReport {
    double fd_error = 0.0;  // ||(f(A_{t+h}) - f(A_{t-h})) / 2h - Q_t||_S2
};
HsDerivativeReport hs_derivative_check(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& k,
                                       double t, double h);

// Composite midpoint rule for int_0^1 Q_t dt with 2^depth panels. Panels may
// be evaluated on `threads` workers; the sum is taken in panel order.
HermitianMatrix bochner_integral(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& k,
                                 int depth, unsigned threads = 1);

// sum_i Phi(l_i, l_i) (U* T U)_ii
cplx trace_of_doi(const KernelMatrix& phi, const EigenDecomposition& e, const Matrix& t);

}  // namespace krein

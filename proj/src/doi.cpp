#include "krein/doi.hpp"

#include <cmath>
#include <sstream>

#include "krein/parallel.hpp"

namespace krein {
namespace {

void require_sampled_at(std::span<const double> points, const EigenDecomposition& e, const char* side) {
    if (points.size() != e.dim()) {
        std::ostringstream msg;
        msg << "doi: kernel has " << points.size() << " " << side << " points, spectrum has " << e.dim();
        throw ShapeError(msg.str());
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        if (std::abs(points[i] - e.eigenvalues[i]) > 1e-9 * (1.0 + std::abs(e.eigenvalues[i])))
            throw ShapeError(std::string("doi: kernel ") + side + " points are not the eigenvalues");
}

}  // namespace

Matrix doi(const KernelMatrix& phi, const EigenDecomposition& ea, const Matrix& t, const EigenDecomposition& eb) {
    require_sampled_at(phi.xs, ea, "row");
    require_sampled_at(phi.ys, eb, "column");
    if (t.rows() != ea.dim() || t.cols() != eb.dim()) throw ShapeError("doi: operand shape does not match spectra");
    const Matrix inner = ea.vectors.adjoint() * t * eb.vectors;
    return ea.vectors * hadamard(phi.values, inner) * eb.vectors.adjoint();
}

HermitianMatrix delta_f(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw ShapeError("delta_f: dimension mismatch");
    return apply_function(f, a) - apply_function(f, b);
}

DoiRepresentationReport doi_representation_check(const ScalarFunction& f, const HermitianMatrix& a,
                                                 const HermitianMatrix& b, std::optional<double> lipschitz,
                                                 std::optional<double> ol_seminorm) {
    if (a.dim() != b.dim()) throw ShapeError("doi_representation_check: dimension mismatch");
    const auto ea = eigh(a);
    const auto eb = eigh(b);
    const Matrix perturbation = (a - b).matrix();

    DoiRepresentationReport r;
    r.lhs = (apply_function(f, ea) - apply_function(f, eb)).matrix();
    r.rhs = doi(loewner_matrix(f, ea.eigenvalues, eb.eigenvalues), ea, perturbation, eb);
    const Matrix diff = r.lhs - r.rhs;
    r.error_s2 = schatten_norm(diff, Schatten::Two);
    r.error_s1 = schatten_norm(diff, Schatten::One);
    r.delta_s2 = schatten_norm(r.lhs, Schatten::Two);
    r.perturbation_s2 = schatten_norm(perturbation, Schatten::Two);
    r.lipschitz = lipschitz ? *lipschitz : lipschitz_seminorm_refined(f);
    r.delta_s1 = schatten_norm(r.lhs, Schatten::One);
    r.perturbation_s1 = schatten_norm(perturbation, Schatten::One);
    r.ol_seminorm = ol_seminorm;
    return r;
}

HermitianMatrix derivative_q(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& k, double t) {
    if (a.dim() != k.dim()) throw ShapeError("derivative_q: dimension mismatch");
    const auto et = eigh(a + t * k);
    const auto phi = loewner_matrix(f, et.eigenvalues, et.eigenvalues);
    return HermitianMatrix::symmetrized(doi(phi, et, k.matrix(), et));
}

HsDerivativeReport hs_derivative_check(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& k,
                                       double t, double h) {
    if (h <= 0.0 || t - h < 0.0 || t + h > 1.0)
        throw std::invalid_argument("hs_derivative_check: need h > 0 and t +- h in [0, 1]");
    const Matrix forward = apply_function(f, a + (t + h) * k).matrix();
    const Matrix backward = apply_function(f, a + (t - h) * k).matrix();
    Matrix central = forward - backward;
    central *= 1.0 / (2.0 * h);
    return {schatten_norm(central - derivative_q(f, a, k, t).matrix(), Schatten::Two)};
}

HermitianMatrix bochner_integral(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& k, int depth,
                                 unsigned threads) {
    if (depth < 0 || depth > 24) throw std::invalid_argument("bochner_integral: depth must be in [0, 24]");
    const std::size_t panels = std::size_t{1} << depth;
    std::vector<Matrix> q(panels);
    parallel_for(panels, threads, [&](std::size_t i) {
        const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(panels);
        q[i] = derivative_q(f, a, k, t).matrix();
    });
    Matrix sum(a.dim(), a.dim());
    for (const auto& m : q) sum += m;
    sum *= 1.0 / static_cast<double>(panels);
    return HermitianMatrix::symmetrized(std::move(sum));
}

cplx trace_of_doi(const KernelMatrix& phi, const EigenDecomposition& e, const Matrix& t) {
    if (!t.square() || t.rows() != e.dim()) throw ShapeError("trace_of_doi: operand shape does not match spectrum");
    require_sampled_at(phi.xs, e, "row");
    require_sampled_at(phi.ys, e, "column");
    const std::size_t n = e.dim();
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // (U* T U)_ii = u_i* T u_i
        cplx mu = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            cplx tu = 0.0;
            for (std::size_t c = 0; c < n; ++c) tu += t(r, c) * e.vectors(c, i);
            mu += std::conj(e.vectors(r, i)) * tu;
        }
        s += phi.values(i, i) * mu;
    }
    return s;
}

}  // namespace krein

#include "krein/shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "krein/parallel.hpp"
#include "krein/quadrature.hpp"

namespace krein {

// ---------------------------------------------------------------------------
// StepFunction

double StepFunction::operator()(double s) const {
    const auto idx = std::upper_bound(breakpoints.begin(), breakpoints.end(), s) - breakpoints.begin();
    return values[static_cast<std::size_t>(idx)];
}

double StepFunction::integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) s += values[i] * (breakpoints[i] - breakpoints[i - 1]);
    return s;
}

double StepFunction::mean(double a, double b) const {
    if (!(b > a)) return (*this)(a);
    double s = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const double lo = std::max(a, breakpoints[i - 1]);
        const double hi = std::min(b, breakpoints[i]);
        if (hi > lo) s += values[i] * (hi - lo);
    }
    return s / (b - a);
}

StepFunction StepFunction::negated() const {
    StepFunction out = *this;
    for (double& v : out.values) v = -v;
    return out;
}

StepFunction xi_from_eigs(std::span<const double> eigs_a, std::span<const double> eigs_b) {
    if (eigs_a.size() != eigs_b.size()) throw ShapeError("xi_from_eigs: spectra have different lengths");
    std::vector<double> a(eigs_a.begin(), eigs_a.end()), b(eigs_b.begin(), eigs_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> points(a);
    points.insert(points.end(), b.begin(), b.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto count_at_least = [](const std::vector<double>& v, double s) {
        return static_cast<long>(v.end() - std::lower_bound(v.begin(), v.end(), s));
    };
    // raw values: tail, one per gap between consecutive points, tail
    std::vector<double> raw{0.0};
    for (std::size_t i = 1; i < points.size(); ++i)
        raw.push_back(static_cast<double>(count_at_least(a, points[i]) - count_at_least(b, points[i])));
    raw.push_back(0.0);

    StepFunction xi;
    xi.values.push_back(0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (raw[i + 1] == xi.values.back()) continue;
        xi.breakpoints.push_back(points[i]);
        xi.values.push_back(raw[i + 1]);
    }
    return xi;
}

double trace_formula_rhs(const ScalarFunction& f, const StepFunction& xi, int nodes_per_interval) {
    double s = 0.0;
    for (std::size_t i = 1; i < xi.breakpoints.size(); ++i) {
        const double v = xi.values[i];
        if (v == 0.0) continue;
        const double lo = xi.breakpoints[i - 1], hi = xi.breakpoints[i];
        for (double x : {lo, hi})
            if (!f.domain.contains(x)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "support point " << x << " of xi lies outside the domain of " << f.name;
                throw DomainError(msg.str(), x);
            }
        s += v * integrate(f.deriv, lo, hi, nodes_per_interval);
    }
    return s;
}

TraceFormulaReport trace_formula_check(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                       int nodes) {
    if (a.dim() != b.dim()) throw ShapeError("trace_formula_check: dimension mismatch");
    const auto ea = eigh(a);
    const auto eb = eigh(b);
    const cplx lhs = trace((apply_function(f, ea) - apply_function(f, eb)).matrix());
    TraceFormulaReport r;
    r.lhs = lhs.real();
    r.lhs_imag = lhs.imag();
    r.rhs = trace_formula_rhs(f, xi_from_eigs(ea.eigenvalues, eb.eigenvalues), nodes);
    r.abs_error = std::abs(r.lhs - r.rhs);
    return r;
}

// ---------------------------------------------------------------------------
// nu_t and its time average

double AtomicSignedMeasure::total_weight() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double AtomicSignedMeasure::total_variation() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::abs(a.weight);
    return s;
}

namespace {

std::vector<double> diagonal_in_basis(const Matrix& k, const Matrix& u) {
    const Matrix ku = k * u;
    std::vector<double> d(u.cols(), 0.0);
    for (std::size_t j = 0; j < u.cols(); ++j) {
        cplx s = 0.0;
        for (std::size_t r = 0; r < u.rows(); ++r) s += std::conj(u(r, j)) * ku(r, j);
        d[j] = s.real();
    }
    return d;
}

}  // namespace

AtomicSignedMeasure nu_t(const HermitianMatrix& a, const HermitianMatrix& k, double t) {
    if (a.dim() != k.dim()) throw ShapeError("nu_t: dimension mismatch");
    const auto e = eigh(a + t * k);
    const auto w = diagonal_in_basis(k.matrix(), e.vectors);
    AtomicSignedMeasure mu;
    for (std::size_t j = 0; j < e.dim(); ++j) mu.atoms.push_back({e.eigenvalues[j], w[j]});
    return mu;
}

HellmannFeynmanReport hellmann_feynman_check(const HermitianMatrix& a, const HermitianMatrix& k, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("hellmann_feynman_check: h must be positive");
    const auto mu = nu_t(a, k, t);
    HellmannFeynmanReport r;
    r.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < mu.atoms.size(); ++j)
        r.min_gap = std::min(r.min_gap, mu.atoms[j].location - mu.atoms[j - 1].location);
    if (!(r.min_gap > 10.0 * h * schatten_norm(k, Schatten::Inf))) {
        r.skipped = true;
        return r;
    }
    const auto up = eigh(a + (t + h) * k).eigenvalues;
    const auto down = eigh(a + (t - h) * k).eigenvalues;
    for (std::size_t j = 0; j < mu.atoms.size(); ++j)
        r.max_error = std::max(r.max_error, std::abs((up[j] - down[j]) / (2.0 * h) - mu.atoms[j].weight));
    return r;
}

double DensityEstimate::total_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < densities.size(); ++i) s += densities[i] * (bin_edges[i + 1] - bin_edges[i]);
    return s;
}

DensityEstimate nu_integrated(const HermitianMatrix& a, const HermitianMatrix& k, int depth, int bins,
                              unsigned threads) {
    if (bins < 8) throw std::invalid_argument("nu_integrated: bins must be >= 8");
    if (depth < 0 || depth > 24) throw std::invalid_argument("nu_integrated: depth must be in [0, 24]");
    const auto e0 = eigh(a).eigenvalues;
    const auto e1 = eigh(a + k).eigenvalues;
    const double pad = schatten_norm(k, Schatten::Inf);
    double lo = std::min(e0.front(), e1.front()) - pad;
    double hi = std::max(e0.back(), e1.back()) + pad;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }

    DensityEstimate d;
    d.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    const double width = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) d.bin_edges[i] = lo + width * i;
    d.bin_edges.back() = hi;

    const std::size_t samples = std::size_t{1} << depth;
    std::vector<AtomicSignedMeasure> measures(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
        measures[i] = nu_t(a, k, (static_cast<double>(i) + 0.5) / static_cast<double>(samples));
    });

    std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
    for (const auto& mu : measures) {
        for (const auto& atom : mu.atoms) {
            auto idx = static_cast<long>(std::floor((atom.location - lo) / width));
            idx = std::clamp(idx, 0L, static_cast<long>(bins) - 1);
            mass[static_cast<std::size_t>(idx)] += atom.weight;
        }
    }
    d.densities.resize(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i)
        d.densities[i] = mass[i] / static_cast<double>(samples) / (d.bin_edges[i + 1] - d.bin_edges[i]);
    return d;
}

NuXiReport nu_vs_xi_check(const HermitianMatrix& a, const HermitianMatrix& b, int depth, int bins, unsigned threads) {
    if (a.dim() != b.dim()) throw ShapeError("nu_vs_xi_check: dimension mismatch");
    const HermitianMatrix k = b - a;
    NuXiReport r;
    r.density = nu_integrated(a, k, depth, bins, threads);
    const auto xi = xi_from_eigs(eigh(a).eigenvalues, eigh(b).eigenvalues);
    r.k_s1 = schatten_norm(k, Schatten::One);
    for (std::size_t i = 0; i < r.density.bins(); ++i) {
        const double left = r.density.bin_edges[i], right = r.density.bin_edges[i + 1];
        const double minus_xi = -xi.mean(left, right);
        r.minus_xi_mean.push_back(minus_xi);
        r.l1_error += std::abs(r.density.densities[i] - minus_xi) * (right - left);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Translation

TranslationScan translation_scan(const ScalarFunction& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                 std::span<const double> t_grid, int nodes) {
    if (a.dim() != b.dim()) throw ShapeError("translation_scan: dimension mismatch");
    const auto ea = eigh(a);
    const auto eb = eigh(b);
    const auto xi = xi_from_eigs(ea.eigenvalues, eb.eigenvalues);
    TranslationScan scan;
    for (double t : t_grid) {
        cplx value;
        try {
            value = trace((apply_function(f, a.shifted(t)) - apply_function(f, b.shifted(t))).matrix());
        } catch (const DomainError& e) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "translation by t = " << t << ": " << e.what();
            throw DomainError(msg.str(), t);
        }
        double quad = 0.0;
        for (std::size_t i = 1; i < xi.breakpoints.size(); ++i) {
            if (xi.values[i] == 0.0) continue;
            quad += xi.values[i] * integrate([&](double x) { return f.deriv(x - t); }, xi.breakpoints[i - 1],
                                             xi.breakpoints[i], nodes);
        }
        scan.t.push_back(t);
        scan.values.push_back(value.real());
        scan.quadrature.push_back(quad);
        scan.max_crosscheck_error = std::max(scan.max_crosscheck_error, std::abs(value.real() - quad));
    }
    return scan;
}

}  // namespace krein

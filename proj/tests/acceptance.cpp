// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "krein/campaign.hpp"
#include "krein/doi.hpp"
#include "krein/funcat.hpp"
#include "krein/multiplier.hpp"
#include "krein/shift.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace krein;

namespace {

// trace formula
constexpr int kTraceTrials = 200;
constexpr double kTracePolyTol = 1e-9;  // times (1 + |lhs|)
constexpr double kTraceSmoothTol = 1e-6;
constexpr int kTraceNodes = 64;
constexpr double kTraceSeconds = 30.0;
// DOI representation
constexpr int kReprTrials = 200;
constexpr double kReprTol = 1e-8;  // times (1 + ||A - B||_S2)
// S2 Lipschitz bound
constexpr int kS2Trials = 1000;
constexpr double kS2Slack = 1e-6;
// trace of DOI
constexpr int kTraceDoiTrials = 500;
constexpr double kTraceDoiTol = 1e-10;
// finite-difference order
constexpr double kFdRatio = 4.0;
constexpr double kFdRatioSlack = 0.20;
constexpr double kFdHMax = 1e-2;
constexpr double kFdHMin = 1e-4;
// Bochner identity
constexpr int kBochnerDepth = 10;
constexpr int kBochnerMonotoneFrom = 4;
constexpr double kBochnerTol = 1e-5;
// nu density
constexpr int kNuInstances = 20;
constexpr int kNuDepth = 10;
constexpr int kNuBins = 256;
constexpr double kNuTol = 0.05;  // times ||K||_S1
// multiplier
constexpr double kMultTol = 1e-6;
constexpr double kUnitNormTol = 1e-6;
constexpr double kJordanOracle = 1.154701;
constexpr double kJordanTol = 1e-4;
// OL growth
constexpr int kGrowthKMax = 10;
constexpr int kGrowthFrom = 2;
constexpr double kGrowthSeconds = 300.0;
// translation
constexpr double kAffineTol = 1e-9;

const Interval kSpectrum{-1.8, 1.8};
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HermitianMatrix instance(std::uint64_t stream, std::size_t index, std::size_t n, Interval spectrum = kSpectrum) {
    return random_hermitian_in(mix_seed(mix_seed(kSeed, stream), index), n, spectrum);
}

std::vector<ScalarFunction> differentiable_catalog() {
    std::vector<ScalarFunction> out;
    for (const auto& f : catalog())
        if (f.differentiable()) out.push_back(f);
    return out;
}

Outcome trace_formula() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    double worst_poly = 0.0, worst_smooth = 0.0;
    for (const char* name : {"identity", "x2", "x3", "x4"}) {
        const auto f = find_function(name);
        for (int t = 0; t < kTraceTrials; ++t) {
            const std::size_t n = 1 + t % 16;
            const auto r = trace_formula_check(f, instance(1, 2 * t, n), instance(1, 2 * t + 1, n), kTraceNodes);
            worst_poly = std::max(worst_poly, r.abs_error / (1.0 + std::abs(r.lhs)));
        }
    }
    const Interval away{0.1, 2.0};
    const auto sine = find_function("sin");
    const auto wobble = find_function("x2sin1x").with_domain(away);
    for (int t = 0; t < kTraceTrials; ++t) {
        const std::size_t n = 1 + t % 16;
        worst_smooth = std::max(
            worst_smooth,
            trace_formula_check(sine, instance(2, 2 * t, n), instance(2, 2 * t + 1, n), kTraceNodes).abs_error);
        worst_smooth = std::max(worst_smooth, trace_formula_check(wobble, instance(3, 2 * t, n, away),
                                                                  instance(3, 2 * t + 1, n, away), kTraceNodes)
                                                  .abs_error);
    }
    const double secs = seconds_since(t0);
    o.pass = worst_poly <= kTracePolyTol && worst_smooth <= kTraceSmoothTol && secs < kTraceSeconds;
    o.detail = fmt("polynomial rel err %.2e, sin/x2sin1x abs err %.2e, %.1f s", worst_poly, worst_smooth, secs);
    return o;
}

Outcome doi_representation() {
    double worst = 0.0;
    std::string worst_f;
    for (const auto& f : differentiable_catalog()) {
        for (int t = 0; t < kReprTrials; ++t) {
            const std::size_t n = 1 + t % 16;
            const auto a = instance(4, 2 * t, n), b = instance(4, 2 * t + 1, n);
            const auto r = doi_representation_check(f, a, b, 1.0);
            const double rel = r.error_s2 / (1.0 + r.perturbation_s2);
            if (rel > worst) worst = rel, worst_f = f.name;
        }
    }
    return {worst <= kReprTol, fmt("max ||err||_S2 / (1 + ||A-B||_S2) = %.2e", worst) + " (" + worst_f + ")"};
}

Outcome s2_bound() {
    const auto& fs = catalog();
    std::vector<double> lip;
    for (const auto& f : fs) lip.push_back(lipschitz_seminorm_refined(f));
    double worst = 0.0;
    int violations = 0;
    for (int t = 0; t < kS2Trials; ++t) {
        const std::size_t idx = static_cast<std::size_t>(t) % fs.size();
        const std::size_t n = 1 + t % 16;
        const auto r = doi_representation_check(fs[idx], instance(5, 2 * t, n), instance(5, 2 * t + 1, n), lip[idx]);
        if (!r.s2_bound_holds(kS2Slack)) ++violations;
        if (r.perturbation_s2 > 0.0) worst = std::max(worst, r.delta_s2 / (lip[idx] * r.perturbation_s2));
    }
    return {violations == 0, fmt("%g violations, max ||f(A)-f(B)||_S2 / (L ||A-B||_S2) = %.4f", violations, worst)};
}

Outcome trace_of_doi_check() {
    double worst = 0.0;
    for (int t = 0; t < kTraceDoiTrials; ++t) {
        const std::size_t n = 1 + t % 8;
        const auto e = eigh(instance(6, t, n));
        const KernelMatrix phi{e.eigenvalues, e.eigenvalues, testing::random_real(60000 + t, n, n)};
        const Matrix tm = testing::random_matrix(70000 + t, n, n);
        const Matrix tu = testing::naive_product(testing::naive_product(e.vectors.adjoint(), tm), e.vectors);
        cplx diagonal_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) diagonal_sum += phi.values(i, i) * tu(i, i);
        const cplx assembled = trace(doi(phi, e, tm, e));
        worst = std::max(worst, std::abs(diagonal_sum - assembled));
        worst = std::max(worst, std::abs(trace_of_doi(phi, e, tm) - assembled));
    }
    return {worst <= kTraceDoiTol, fmt("max |sum_i Phi_ii (U*TU)_ii - trace(DOI)| = %.2e", worst)};
}

Outcome fd_order() {
    // C^2 entries whose central difference is not exact (x^2 and x are).
    std::vector<double> hs;
    for (double h = kFdHMax; h >= kFdHMin; h *= 0.5) hs.push_back(h);
    double lo = 1e300, hi = 0.0;
    for (const char* name : {"x3", "x4", "sin", "bump"}) {
        const auto f = find_function(name);
        for (int s = 0; s < 5; ++s) {
            const std::size_t n = 4 + s;
            const auto a = instance(7, 2 * s, n, {-1.2, 1.2});
            const auto k = instance(7, 2 * s + 1, n, {-1.2, 1.2}) - a;
            std::vector<double> err;
            for (double h : hs) err.push_back(hs_derivative_check(f, a, k, 0.5, h).fd_error);
            for (std::size_t i = 1; i < err.size(); ++i) {
                const double ratio = err[i - 1] / err[i];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
    }
    const bool pass = lo >= kFdRatio * (1.0 - kFdRatioSlack) && hi <= kFdRatio * (1.0 + kFdRatioSlack);
    return {pass, fmt("error ratio per halving in [%.3f, %.3f], h from %.0e", lo, hi, kFdHMax) +
                      fmt(" to %.2e", hs.back())};
}

Outcome bochner() {
    const auto sine = find_function("sin");
    double worst_final = 0.0;
    int non_monotone = 0;
    for (int s = 0; s < 14; ++s) {
        const std::size_t n = 2 + s % 7;
        const auto a = instance(8, 2 * s, n), b = instance(8, 2 * s + 1, n);
        const Matrix delta = delta_f(sine, a, b).matrix();
        double prev = 0.0;
        for (int d = 0; d <= kBochnerDepth; ++d) {
            const double r =
                schatten_norm(delta + bochner_integral(sine, a, b - a, d).matrix(), Schatten::One);
            if (d > kBochnerMonotoneFrom && !(r < prev)) ++non_monotone;
            prev = r;
        }
        worst_final = std::max(worst_final, prev);
    }
    return {non_monotone == 0 && worst_final <= kBochnerTol,
            fmt("max S1 residual at depth 10 = %.2e, %g non-decreasing steps", worst_final, non_monotone)};
}

Outcome nu_density() {
    double worst = 0.0;
    int not_refining = 0;
    for (int i = 0; i < kNuInstances; ++i) {
        const std::size_t n = 1 + i % 8;
        const auto a = instance(9, 2 * i, n), b = instance(9, 2 * i + 1, n);
        // errors already at rounding level (K = 0, or an exactly resolved 1x1 sweep) need not decrease
        double prev = 0.0, floor = 0.0;
        for (int depth = kBochnerMonotoneFrom; depth <= kNuDepth; ++depth) {
            const auto r = nu_vs_xi_check(a, b, depth, kNuBins);
            floor = 1e-12 * (1.0 + r.k_s1);
            if (depth > kBochnerMonotoneFrom && !(r.l1_error < prev) && prev > floor) ++not_refining;
            prev = r.l1_error;
            if (depth == kNuDepth) {
                if (!(r.l1_error <= kNuTol * r.k_s1)) ++not_refining, worst = 1e300;
                if (r.k_s1 > 0.0) worst = std::max(worst, r.l1_error / r.k_s1);
            }
        }
    }
    return {worst <= kNuTol && not_refining == 0,
            fmt("max L1 / ||K||_S1 at depth 10 = %.4f, %g depth steps 4..10 without decrease", worst, not_refining)};
}

Outcome multiplier() {
    int bad = 0, results = 0;
    double worst_gap = 0.0;
    auto audit = [&](const RealMatrix& m) {
        const auto r = multiplier_norm(m, kMultTol);
        ++results;
        const double gap = r.upper - r.lower;
        worst_gap = std::max(worst_gap, gap / r.upper);
        const bool ok = r.converged && r.lower <= r.upper && gap <= kMultTol * r.upper &&
                        (r.certificate.reproduce() - m.to_complex()).max_abs() <= 1e-8 &&
                        std::abs(witness_ratio(m, r.witness) - r.lower) <= 1e-12 * r.upper &&
                        std::abs(certificate_bound(r.certificate) - r.upper) <= 1e-12 * r.upper;
        if (!ok) ++bad;
        return r;
    };
    double unit_err = 0.0;
    for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
        unit_err = std::max(unit_err, std::abs(audit(RealMatrix(n, n, 1.0)).upper - 1.0));
        RealMatrix eye(n, n);
        for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
        unit_err = std::max(unit_err, std::abs(audit(eye).upper - 1.0));
    }
    for (std::uint64_t s = 0; s < 30; ++s) audit(testing::random_real(80000 + s, 1 + s % 12, 1 + (s * 7) % 12));
    for (const char* name : {"x2", "sin", "bump", "x2sin1x"}) {
        const auto grid = uniform_grid({-2.0, 2.0}, 16);
        audit(loewner_matrix(find_function(name), grid, grid).values);
    }
    RealMatrix jordan(2, 2, 1.0);
    jordan(1, 0) = 0.0;
    const double oracle = testing::brute_force_norm_2x2(jordan);
    const double got = audit(jordan).upper;
    const bool pass = bad == 0 && unit_err <= kUnitNormTol && std::abs(oracle - kJordanOracle) <= 1e-6 &&
                      std::abs(got - oracle) <= kJordanTol;
    return {pass, fmt("%g/%g results bracketed, max rel gap %.1e", results - bad, results, worst_gap) +
                      fmt(", |unit - 1| %.1e, [[1,1],[0,1]] %.7f vs oracle %.7f", unit_err, got, oracle)};
}

Outcome ol_growth() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = abs_growth_report(kGrowthKMax);
    const auto ident = growth_report(find_function("identity"), kGrowthKMax);
    const double secs = seconds_since(t0);
    bool pass = secs < kGrowthSeconds;
    for (const auto& r : rows) pass = pass && r.converged && r.lower <= r.upper;
    for (int k = kGrowthFrom; k < kGrowthKMax; ++k) pass = pass && rows[k + 1].lower > rows[k].lower;
    double ident_err = 0.0;
    for (const auto& r : ident)
        ident_err = std::max({ident_err, std::abs(r.lower - 1.0), std::abs(r.upper - 1.0)});
    pass = pass && ident_err <= kUnitNormTol;
    return {pass, fmt("|x| lower bound %.5f (k=2) -> %.5f (k=10); identity max |v - 1| %.1e", rows[kGrowthFrom].lower,
                      rows[kGrowthKMax].lower, ident_err) +
                      fmt(", %.1f s", secs)};
}

Outcome translation() {
    double worst_affine = 0.0;
    std::vector<double> ts;
    for (int i = 0; i <= 100; ++i) ts.push_back(-0.5 + 0.01 * i);
    for (int s = 0; s < 5; ++s) {
        const std::size_t n = 3 + s;
        const auto a = instance(10, 2 * s, n, {-1.2, 1.2}), b = instance(10, 2 * s + 1, n, {-1.2, 1.2});
        const auto scan = translation_scan(find_function("x2"), a, b, ts);
        const double c0 = trace(testing::naive_product(a.matrix(), a.matrix()) -
                                testing::naive_product(b.matrix(), b.matrix()))
                              .real();
        const double c1 = -2.0 * trace((a - b).matrix()).real();
        for (std::size_t i = 0; i < ts.size(); ++i)
            worst_affine = std::max(worst_affine, std::abs(scan.values[i] - (c0 + c1 * ts[i])));
    }

    const auto a = instance(11, 0, 6, {-1.2, 1.2}), b = instance(11, 1, 6, {-1.2, 1.2});
    std::vector<double> omega;
    for (int level = 0; level < 5; ++level) {
        const int steps = 10 << level;
        std::vector<double> grid;
        for (int i = 0; i <= steps; ++i) grid.push_back(-0.5 + static_cast<double>(i) / steps);
        const auto scan = translation_scan(find_function("sin"), a, b, grid);
        double w = 0.0;
        for (std::size_t i = 1; i < grid.size(); ++i) w = std::max(w, std::abs(scan.values[i] - scan.values[i - 1]));
        omega.push_back(w);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < omega.size(); ++i) decreasing = decreasing && omega[i] < omega[i - 1];
    return {worst_affine <= kAffineTol && decreasing,
            fmt("x2 affine residual %.2e; sin modulus %.3e -> %.3e over 5 refinements", worst_affine, omega.front(),
                omega.back())};
}

Outcome determinism() {
    int mismatches = 0;
    std::string which;
    for (const auto& name : command_names()) {
        Config base;
        base.set("seed", "77");
        std::string first;
        for (const char* threads : {"1", "8", "1", "8"}) {
            Config c = base;
            c.set("threads", threads);
            const auto out = run_command(name, c);
            const std::string artifact = std::to_string(out.exit_code) + "\n" + out.artifact;
            if (first.empty())
                first = artifact;
            else if (artifact != first)
                ++mismatches, which += " " + name;
        }
    }
    return {mismatches == 0, fmt("%g commands x 4 runs (threads 1, 8), %g mismatches",
                                 static_cast<double>(command_names().size()), mismatches) +
                                 which};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "trace formula", trace_formula},
        {2, "DOI representation", doi_representation},
        {3, "S2 Lipschitz bound", s2_bound},
        {4, "trace of DOI", trace_of_doi_check},
        {5, "HS differentiability order", fd_order},
        {6, "Bochner identity", bochner},
        {7, "nu density vs -xi", nu_density},
        {8, "multiplier sandwich", multiplier},
        {9, "|x| growth vs identity", ol_growth},
        {10, "translation", translation},
        {11, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s  %2d  %-28s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}

#include "krein/funcat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace krein {

std::string to_string(OlStatus status) {
    switch (status) {
        case OlStatus::KnownOL: return "known-OL";
        case OlStatus::KnownNotOL: return "known-not-OL";
        case OlStatus::Unknown: break;
    }
    return "unknown";
}

bool ScalarFunction::is_exceptional(double x) const {
    return std::find(exceptional_points.begin(), exceptional_points.end(), x) != exceptional_points.end();
}

ScalarFunction ScalarFunction::with_domain(Interval d) const {
    ScalarFunction copy = *this;
    copy.domain = d;
    return copy;
}

namespace {

void require_in_domain(const ScalarFunction& f, double x) {
    if (!f.domain.contains(x)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "point " << x << " outside the domain [" << f.domain.lo << ", " << f.domain.hi << "] of " << f.name;
        throw DomainError(msg.str(), x);
    }
}

}  // namespace

double divided_difference(const ScalarFunction& f, double x, double y) {
    require_in_domain(f, x);
    require_in_domain(f, y);
    if (x != y) return (f(x) - f(y)) / (x - y);
    if (f.is_exceptional(x)) return f.diagonal_convention;
    return f.deriv(x);
}

KernelMatrix loewner_matrix(const ScalarFunction& f, std::span<const double> xs, std::span<const double> ys) {
    for (double x : xs) require_in_domain(f, x);
    for (double y : ys) require_in_domain(f, y);
    std::vector<double> fx(xs.size()), fy(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);
    for (std::size_t j = 0; j < ys.size(); ++j) fy[j] = f(ys[j]);
    KernelMatrix k{{xs.begin(), xs.end()}, {ys.begin(), ys.end()}, RealMatrix(xs.size(), ys.size())};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double x = xs[i], y = ys[j];
            if (x != y)
                k.values(i, j) = (fx[i] - fy[j]) / (x - y);
            else
                k.values(i, j) = f.is_exceptional(x) ? f.diagonal_convention : f.deriv(x);
        }
    }
    return k;
}

std::vector<double> uniform_grid(Interval domain, int points) {
    if (points < 2) throw std::invalid_argument("uniform grid needs at least 2 points");
    std::vector<double> g(points);
    const double h = domain.width() / (points - 1);
    for (int i = 0; i < points; ++i) g[i] = domain.lo + h * i;
    g.back() = domain.hi;
    return g;
}

std::vector<double> geometric_grid(int k, double center, double scale) {
    if (k < 0) throw std::invalid_argument("geometric grid depth must be nonnegative");
    std::vector<double> g;
    for (int j = 0; j <= k; ++j) {
        const double r = scale * std::ldexp(1.0, -j);
        g.push_back(center - r);
        g.push_back(center + r);
    }
    std::sort(g.begin(), g.end());
    return g;
}

double lipschitz_seminorm_estimate(const ScalarFunction& f, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("lipschitz_seminorm_estimate: grid_size must be >= 2");
    const auto grid = uniform_grid(f.domain, grid_size);
    std::vector<double> fx(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) fx[i] = f(grid[i]);
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        best = std::max(best, std::abs(divided_difference(f, grid[i], grid[i])));
        for (std::size_t j = i + 1; j < grid.size(); ++j)
            best = std::max(best, std::abs((fx[i] - fx[j]) / (grid[i] - grid[j])));
    }
    return best;
}

double lipschitz_seminorm_refined(const ScalarFunction& f, int grid_size) {
    const double fine = lipschitz_seminorm_estimate(f, grid_size);
    const double coarse = lipschitz_seminorm_estimate(f, grid_size / 2 + 1);
    return fine + std::abs(fine - coarse);
}

ScalarFunction make_polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    std::ostringstream name;
    name.precision(17);
    name << "poly:[";
    for (std::size_t i = 0; i < coeffs.size(); ++i) name << (i ? "," : "") << coeffs[i];
    name << "]";
    ScalarFunction f;
    f.name = name.str();
    f.eval = [coeffs](double x) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
    f.deriv = [coeffs](double x) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coeffs[k];
        return acc;
    };
    // smooth on a compact domain, hence operator Lipschitz there
    f.ol_status = OlStatus::KnownOL;
    f.smoothness = 1000;
    if (coeffs.size() <= 2) f.lipschitz_bound = std::abs(coeffs.size() == 2 ? coeffs[1] : 0.0);
    return f;
}

namespace {

std::vector<ScalarFunction> build_catalog() {
    std::vector<ScalarFunction> out;

    auto poly = [](std::string name, std::vector<double> c) {
        ScalarFunction f = make_polynomial(std::move(c));
        f.name = std::move(name);
        return f;
    };
    out.push_back(poly("identity", {0.0, 1.0}));
    out.push_back(poly("x2", {0.0, 0.0, 1.0}));
    out.push_back(poly("x3", {0.0, 0.0, 0.0, 1.0}));
    out.push_back(poly("x4", {0.0, 0.0, 0.0, 0.0, 1.0}));

    ScalarFunction sine;
    sine.name = "sin";
    sine.eval = [](double x) { return std::sin(x); };
    sine.deriv = [](double x) { return std::cos(x); };
    sine.ol_status = OlStatus::KnownOL;
    sine.smoothness = 1000;
    sine.lipschitz_bound = 1.0;
    out.push_back(sine);

    // (1 - x^2)^3 on |x| < 1: C^2 with a jump in the third derivative at +-1
    ScalarFunction bump;
    bump.name = "bump";
    bump.eval = [](double x) {
        const double u = 1.0 - x * x;
        return u > 0.0 ? u * u * u : 0.0;
    };
    bump.deriv = [](double x) {
        const double u = 1.0 - x * x;
        return u > 0.0 ? -6.0 * x * u * u : 0.0;
    };
    bump.ol_status = OlStatus::KnownOL;
    bump.smoothness = 2;
    out.push_back(bump);

    ScalarFunction abs;
    abs.name = "abs";
    abs.eval = [](double x) { return std::abs(x); };
    abs.deriv = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
    abs.ol_status = OlStatus::KnownNotOL;
    abs.exceptional_points = {0.0};
    abs.diagonal_convention = 0.0;
    abs.smoothness = 0;
    abs.lipschitz_bound = 1.0;
    out.push_back(abs);

    // x^2 sin(1/x), extended by 0: differentiable everywhere, f' discontinuous at 0
    ScalarFunction wobble;
    wobble.name = "x2sin1x";
    wobble.eval = [](double x) { return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / x); };
    wobble.deriv = [](double x) { return x == 0.0 ? 0.0 : 2.0 * x * std::sin(1.0 / x) - std::cos(1.0 / x); };
    wobble.ol_status = OlStatus::KnownOL;
    wobble.smoothness = 0;
    out.push_back(wobble);

    for (auto& f : out) f.domain = Interval{-2.0, 2.0};
    return out;
}

}  // namespace

const std::vector<ScalarFunction>& catalog() {
    static const std::vector<ScalarFunction> entries = build_catalog();
    return entries;
}

ScalarFunction find_function(const std::string& text) {
    if (text.rfind("poly:", 0) == 0) {
        std::vector<double> coeffs;
        try {
            coeffs = nlohmann::json::parse(text.substr(5)).get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument("bad polynomial text '" + text + "', expected poly:[c0,c1,...]");
        }
        ScalarFunction f = make_polynomial(std::move(coeffs));
        f.domain = Interval{-2.0, 2.0};
        return f;
    }
    for (const auto& f : catalog())
        if (f.name == text) return f;
    throw std::invalid_argument("unknown function '" + text + "'");
}

}  // namespace krein

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace krein {

struct Interval {
    double lo = -2.0;
    double hi = 2.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

enum class OlStatus { KnownOL, KnownNotOL, Unknown };

std::string to_string(OlStatus status);

// A real function with its pointwise derivative and the metadata the
// experiments need. Exceptional points are where the derivative does not
// exist; the divided difference uses `diagonal_convention` there.
struct ScalarFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    Interval domain;
    OlStatus ol_status = OlStatus::Unknown;
    std::vector<double> exceptional_points;
    double diagonal_convention = 0.0;
    // Number of continuous derivatives on the domain (large for analytic f).
    int smoothness = 0;
    // A Lipschitz constant valid on the whole real line, when one is known.
    std::optional<double> lipschitz_bound;

    double operator()(double x) const { return eval(x); }
    bool is_exceptional(double x) const;
    bool differentiable() const { return exceptional_points.empty(); }
    ScalarFunction with_domain(Interval d) const;
};

}  // namespace krein

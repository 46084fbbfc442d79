#include "krein/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "krein/doi.hpp"
#include "krein/funcat.hpp"
#include "krein/linalg.hpp"
#include "krein/multiplier.hpp"
#include "krein/parallel.hpp"
#include "krein/shift.hpp"

namespace krein {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        c.set(key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key, "");
    try {
        std::size_t used = 0;
        const int out = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key, "");
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const auto out = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a nonnegative integer, got '" + v + "'");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key, "");
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::istringstream in(get(key, ""));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': bad list entry '" + item + "'");
        }
    }
    return out;
}

unsigned Config::threads() const {
    const int t = get_int("threads", 1);
    if (t < 1 || t > 256) throw ConfigError("threads must be in [1, 256]");
    return static_cast<unsigned>(t);
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(it.key()).dump() + ": ";
                dump(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            break;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump(j[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            break;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            // JSON has no inf/nan
            out += std::isfinite(v) ? format_double(v) : "null";
            break;
        }
        default:
            out += j.dump();
    }
}

std::string to_json_text(const Json& j) {
    std::string out;
    dump(j, out, 0);
    out += "\n";
    return out;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ",";
        first = false;
        out += c;
    }
    out += "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Shared inputs

ScalarFunction function_from(const Config& c, const std::string& fallback) {
    ScalarFunction f;
    try {
        f = find_function(c.get("f", fallback));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.has("domain")) {
        const auto d = c.get_doubles("domain", {});
        if (d.size() != 2 || !(d[0] < d[1])) throw ConfigError("domain must be 'lo,hi' with lo < hi");
        f = f.with_domain({d[0], d[1]});
    }
    return f;
}

std::size_t dimension_from(const Config& c, int fallback) {
    const int n = c.get_int("n", fallback);
    if (n < 1 || n > 256) throw ConfigError("n must be in [1, 256]");
    return static_cast<std::size_t>(n);
}

int trials_from(const Config& c, int fallback) {
    const int t = c.get_int("trials", fallback);
    if (t < 1) throw ConfigError("trials must be >= 1");
    return t;
}

// Spectral interval for generated operators: [lo, hi] keys, else the
// function's domain shrunk by 5% on each side.
Interval spectrum_from(const Config& c, const ScalarFunction& f) {
    const double w = f.domain.width();
    Interval s{c.get_double("lo", f.domain.lo + 0.05 * w), c.get_double("hi", f.domain.hi - 0.05 * w)};
    if (!(s.lo < s.hi)) throw ConfigError("spectral interval needs lo < hi");
    return s;
}

HermitianMatrix load_hermitian(const std::string& path) {
    try {
        return HermitianMatrix(read_matrix_file(path));
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

struct OperatorPair {
    HermitianMatrix a;
    HermitianMatrix b;
};

// A and B from the `a`/`b` matrix files when given, else seeded samples in
// the spectral interval (stream 2i for A, 2i + 1 for B).
OperatorPair pair_from(const Config& c, const ScalarFunction& f, std::uint64_t trial = 0) {
    if (c.has("a") != c.has("b")) throw ConfigError("give both a and b matrix files, or neither");
    if (c.has("a")) {
        OperatorPair p{load_hermitian(c.get("a", "")), load_hermitian(c.get("b", ""))};
        if (p.a.dim() != p.b.dim()) throw ConfigError("a and b have different dimensions");
        return p;
    }
    const std::size_t n = dimension_from(c, 6);
    const std::uint64_t seed = c.get_u64("seed", 1);
    const Interval s = spectrum_from(c, f);
    return {random_hermitian_in(mix_seed(seed, 2 * trial), n, s), random_hermitian_in(mix_seed(seed, 2 * trial + 1), n, s)};
}

}  // namespace

// ---------------------------------------------------------------------------
// trace-check

CommandOutput cmd_trace_check(const Config& c) {
    const ScalarFunction f = function_from(c, "x3");
    const int trials = trials_from(c, 50);
    const int nodes = c.get_int("nodes", 32);
    const double tol = c.get_double("tol", 1e-8);
    const unsigned threads = c.threads();
    if (nodes < 1 || nodes > 512) throw ConfigError("nodes must be in [1, 512]");

    std::vector<TraceFormulaReport> reports(static_cast<std::size_t>(trials));
    parallel_for(reports.size(), threads, [&](std::size_t t) {
        const auto p = pair_from(c, f, t);
        reports[t] = trace_formula_check(f, p.a, p.b, nodes);
    });
    std::size_t worst = 0;
    for (std::size_t t = 0; t < reports.size(); ++t)
        if (reports[t].abs_error > reports[worst].abs_error) worst = t;
    const bool passed = reports[worst].abs_error <= tol;

    Json j;
    j["command"] = "trace-check";
    j["function"] = f.name;
    j["ol_status"] = to_string(f.ol_status);
    j["n"] = reports.empty() ? 0 : dimension_from(c, 6);
    j["trials"] = trials;
    j["seed"] = c.get_u64("seed", 1);
    j["nodes"] = nodes;
    j["tol"] = tol;
    j["max_abs_error"] = reports[worst].abs_error;
    j["worst_trial"] = worst;
    j["worst"] = {{"lhs", reports[worst].lhs},
                  {"rhs", reports[worst].rhs},
                  {"abs_error", reports[worst].abs_error},
                  {"lhs_imag", reports[worst].lhs_imag}};
    j["passed"] = passed;
    if (f.ol_status == OlStatus::KnownNotOL) j["warning"] = f.name + " is not operator Lipschitz";

    CommandOutput out;
    out.artifact = to_json_text(j);
    out.exit_code = passed ? kExitOk : kExitFailure;
    if (!passed) out.diagnostics = "trace formula error " + format_double(reports[worst].abs_error) + " exceeds tol";
    return out;
}

// ---------------------------------------------------------------------------
// xi

CommandOutput cmd_xi(const Config& c) {
    const ScalarFunction f = function_from(c, "identity");
    const auto p = pair_from(c, f);
    const auto xi = xi_from_eigs(eigh(p.a).eigenvalues, eigh(p.b).eigenvalues);
    CommandOutput out;
    out.artifact = "breakpoint,value\n";
    for (std::size_t i = 0; i < xi.breakpoints.size(); ++i)
        out.artifact += csv_row({format_double(xi.breakpoints[i]), format_double(xi.values[i + 1])});
    return out;
}

// ---------------------------------------------------------------------------
// doi-check

CommandOutput cmd_doi_check(const Config& c) {
    const ScalarFunction f = function_from(c, "x3");
    const int trials = trials_from(c, 20);
    const double tol = c.get_double("tol", 1e-8);
    const unsigned threads = c.threads();
    const double lipschitz = lipschitz_seminorm_refined(f);

    std::vector<DoiRepresentationReport> reports(static_cast<std::size_t>(trials));
    parallel_for(reports.size(), threads, [&](std::size_t t) {
        const auto p = pair_from(c, f, t);
        reports[t] = doi_representation_check(f, p.a, p.b, lipschitz);
    });
    double worst_rel = 0.0, worst_s1 = 0.0, worst_ratio = 0.0;
    bool bound_ok = true;
    for (const auto& r : reports) {
        worst_rel = std::max(worst_rel, r.error_s2 / (1.0 + r.perturbation_s2));
        worst_s1 = std::max(worst_s1, r.error_s1);
        if (r.perturbation_s2 > 0.0) worst_ratio = std::max(worst_ratio, r.delta_s2 / r.perturbation_s2);
        bound_ok = bound_ok && r.s2_bound_holds();
    }
    const bool passed = worst_rel <= tol && bound_ok;

    Json j;
    j["command"] = "doi-check";
    j["function"] = f.name;
    j["trials"] = trials;
    j["seed"] = c.get_u64("seed", 1);
    j["tol"] = tol;
    j["max_rel_error_s2"] = worst_rel;
    j["max_error_s1"] = worst_s1;
    j["lipschitz_estimate"] = lipschitz;
    j["max_s2_ratio"] = worst_ratio;
    j["s2_bound_holds"] = bound_ok;
    j["passed"] = passed;
    CommandOutput out;
    out.artifact = to_json_text(j);
    out.exit_code = passed ? kExitOk : kExitFailure;
    return out;
}

// ---------------------------------------------------------------------------
// mult-norm, ol-growth

namespace {

std::string growth_csv(const std::vector<GrowthRow>& rows) {
    std::string s = "n,lower,upper,iterations\n";
    for (const auto& r : rows)
        s += csv_row({std::to_string(r.n), format_double(r.lower), format_double(r.upper), std::to_string(r.iterations)});
    return s;
}

double tol_from(const Config& c) {
    const double tol = c.get_double("tol", 1e-6);
    if (!(tol >= 1e-6)) throw ConfigError("multiplier tolerance must be >= 1e-6");
    return tol;
}

std::vector<int> sizes_from(const Config& c) {
    std::vector<int> sizes;
    for (double v : c.get_doubles("sizes", {})) {
        if (v != std::floor(v) || v < 2 || v > 64) throw ConfigError("sizes must be integers in [2, 64]");
        sizes.push_back(static_cast<int>(v));
    }
    return sizes;
}

GridKind grid_from(const Config& c) {
    const std::string g = c.get("grid", "uniform");
    if (g == "uniform") return GridKind::Uniform;
    if (g == "geometric") return GridKind::Geometric;
    throw ConfigError("grid must be 'uniform' or 'geometric'");
}

}  // namespace

CommandOutput cmd_mult_norm(const Config& c) {
    const double tol = tol_from(c);
    std::vector<GrowthRow> rows;
    if (c.has("kernel")) {
        Matrix m;
        try {
            m = read_matrix_file(c.get("kernel", ""));
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        RealMatrix k(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m(i, j).imag() != 0.0) throw ConfigError("kernel must be real");
                k(i, j) = m(i, j).real();
            }
        if (m.rows() > kMultiplierMaxDim || m.cols() > kMultiplierMaxDim)
            throw ConfigError("kernel dimensions must be <= 64");
        const auto res = multiplier_norm(k, tol);
        rows.push_back({0, m.rows(), res.lower, res.upper, res.iterations, res.converged});
    } else {
        const ScalarFunction f = function_from(c, "identity");
        std::vector<int> sizes = sizes_from(c);
        if (sizes.empty()) sizes.push_back(c.get_int("points", 8));
        const GridKind kind = grid_from(c);
        for (int s : sizes)
            if (s < 2 || s > 64 || (kind == GridKind::Geometric && s % 2 != 0))
                throw ConfigError("grid sizes must be in [2, 64] (even for geometric grids)");
        rows = ol_seminorm_sweep(f, sizes, kind, tol);
    }
    CommandOutput out;
    out.artifact = growth_csv(rows);
    const bool all = std::all_of(rows.begin(), rows.end(), [](const GrowthRow& r) { return r.converged; });
    out.exit_code = all ? kExitOk : kExitFailure;
    if (!all) out.diagnostics = "multiplier iteration cap reached; best bracket reported";
    return out;
}

CommandOutput cmd_ol_growth(const Config& c) {
    const ScalarFunction f = function_from(c, "abs");
    const double tol = tol_from(c);
    const int kmax = c.get_int("kmax", 10);
    if (kmax < 0 || kmax > 12) throw ConfigError("kmax must be in [0, 12]");
    const auto rows = growth_report(f, kmax, tol);
    CommandOutput out;
    out.artifact = growth_csv(rows);
    const bool all = std::all_of(rows.begin(), rows.end(), [](const GrowthRow& r) { return r.converged; });
    out.exit_code = all ? kExitOk : kExitFailure;
    if (!all) out.diagnostics = "multiplier iteration cap reached; best bracket reported";
    return out;
}

// ---------------------------------------------------------------------------
// path-check

CommandOutput cmd_path_check(const Config& c) {
    const ScalarFunction f = function_from(c, "sin");
    const int max_depth = c.get_int("depth", 10);
    const double tol = c.get_double("tol", 1e-5);
    const int bins = c.get_int("bins", 256);
    const double t_mid = c.get_double("t", 0.5);
    const unsigned threads = c.threads();
    if (max_depth < 1 || max_depth > 16) throw ConfigError("depth must be in [1, 16]");
    if (bins < 8) throw ConfigError("bins must be >= 8");
    const auto steps = c.get_doubles("fd_steps", {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4, 1.5625e-4});

    const auto p = pair_from(c, f);
    const HermitianMatrix k = p.b - p.a;
    const Matrix delta = delta_f(f, p.a, p.b).matrix();
    const double floor = 1e-12 * (1.0 + schatten_norm(k, Schatten::One));

    Json bochner = Json::array();
    std::vector<double> residuals;
    for (int d = 1; d <= max_depth; ++d) {
        const Matrix integral = bochner_integral(f, p.a, k, d, threads).matrix();
        const double r = schatten_norm(delta + integral, Schatten::One);
        residuals.push_back(r);
        bochner.push_back({{"depth", d}, {"residual_s1", r}});
    }
    bool monotone = true;
    for (std::size_t i = 4; i < residuals.size(); ++i)
        if (residuals[i] > residuals[i - 1] && residuals[i] > floor) monotone = false;
    const double final_residual = residuals.back();

    Json hs = Json::array();
    for (double h : steps) {
        if (!(h > 0.0) || t_mid - h < 0.0 || t_mid + h > 1.0) throw ConfigError("each h needs t +- h inside [0, 1]");
        hs.push_back({{"h", h}, {"fd_error", hs_derivative_check(f, p.a, k, t_mid, h).fd_error}});
    }

    const auto nu = nu_vs_xi_check(p.a, p.b, max_depth, bins, threads);

    const bool passed = monotone && final_residual <= tol;
    Json j;
    j["command"] = "path-check";
    j["function"] = f.name;
    j["n"] = p.a.dim();
    j["seed"] = c.get_u64("seed", 1);
    j["tol"] = tol;
    j["bochner"] = bochner;
    j["monotone_after_depth_4"] = monotone;
    j["final_residual_s1"] = final_residual;
    j["hs_derivative"] = hs;
    j["nu_vs_xi"] = {{"depth", max_depth}, {"bins", bins}, {"l1_error", nu.l1_error}, {"k_s1", nu.k_s1}};
    j["passed"] = passed;
    CommandOutput out;
    out.artifact = to_json_text(j);
    out.exit_code = passed ? kExitOk : kExitFailure;
    if (!monotone)
        out.diagnostics = "Bochner residual increased after depth 4";
    else if (!passed)
        out.diagnostics = "Bochner residual " + format_double(final_residual) + " at depth " +
                          std::to_string(max_depth) + " exceeds tol " + format_double(tol);
    return out;
}

// ---------------------------------------------------------------------------
// nu-density

CommandOutput cmd_nu_density(const Config& c) {
    const ScalarFunction f = function_from(c, "identity");
    const int depth = c.get_int("depth", 10);
    const int bins = c.get_int("bins", 256);
    const double tol = c.get_double("tol", 0.05);
    if (depth < 0 || depth > 16) throw ConfigError("depth must be in [0, 16]");
    if (bins < 8) throw ConfigError("bins must be >= 8");
    const auto p = pair_from(c, f);
    const auto r = nu_vs_xi_check(p.a, p.b, depth, bins, c.threads());
    CommandOutput out;
    out.artifact = "bin_left,bin_right,density,minus_xi_mean\n";
    for (std::size_t i = 0; i < r.density.bins(); ++i)
        out.artifact += csv_row({format_double(r.density.bin_edges[i]), format_double(r.density.bin_edges[i + 1]),
                                 format_double(r.density.densities[i]), format_double(r.minus_xi_mean[i])});
    out.diagnostics = "l1_error " + format_double(r.l1_error) + " (||K||_S1 = " + format_double(r.k_s1) + ")";
    out.exit_code = r.l1_error <= tol * r.k_s1 ? kExitOk : kExitFailure;
    return out;
}

// ---------------------------------------------------------------------------
// translate

CommandOutput cmd_translate(const Config& c) {
    const ScalarFunction f = function_from(c, "x2");
    const double t_min = c.get_double("t_min", -0.5);
    const double t_max = c.get_double("t_max", 0.5);
    const int steps = c.get_int("t_steps", 101);
    if (steps < 1) throw ConfigError("t_steps must be >= 1");
    if (steps > 1 && !(t_min < t_max)) throw ConfigError("t_min must be < t_max");
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        grid[i] = steps == 1 ? t_min : t_min + (t_max - t_min) * static_cast<double>(i) / (steps - 1);
    // generated spectra leave room for the largest shift
    Config shifted = c;
    const double reach = std::max(std::abs(t_min), std::abs(t_max));
    const double w = f.domain.width();
    if (!c.has("lo")) shifted.set("lo", format_double(f.domain.lo + 0.05 * w + reach));
    if (!c.has("hi")) shifted.set("hi", format_double(f.domain.hi - 0.05 * w - reach));
    const auto p = pair_from(shifted, f);
    CommandOutput out;
    try {
        const auto scan = translation_scan(f, p.a, p.b, grid);
        out.artifact = "t,trace\n";
        for (std::size_t i = 0; i < scan.t.size(); ++i)
            out.artifact += csv_row({format_double(scan.t[i]), format_double(scan.values[i])});
        out.diagnostics = "max |trace - int f'(x - t) xi(x) dx| = " + format_double(scan.max_crosscheck_error);
    } catch (const DomainError& e) {
        out.exit_code = kExitFailure;
        out.diagnostics = e.what();
    }
    return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"trace-check", "xi",         "doi-check",  "mult-norm",
                                                "ol-growth",   "path-check", "nu-density", "translate"};
    return names;
}

CommandOutput run_command(const std::string& name, const Config& config) {
    static const std::map<std::string, std::function<CommandOutput(const Config&)>> table{
        {"trace-check", cmd_trace_check}, {"xi", cmd_xi},
        {"doi-check", cmd_doi_check},     {"mult-norm", cmd_mult_norm},
        {"ol-growth", cmd_ol_growth},     {"path-check", cmd_path_check},
        {"nu-density", cmd_nu_density},   {"translate", cmd_translate},
    };
    CommandOutput out;
    auto it = table.find(name);
    if (it == table.end()) {
        out.exit_code = kExitUsage;
        out.diagnostics = "unknown command '" + name + "'";
        return out;
    }
    try {
        return it->second(config);
    } catch (const DomainError& e) {
        out.exit_code = kExitFailure;
        out.diagnostics = e.what();
    } catch (const ConvergenceError& e) {
        out.exit_code = kExitFailure;
        out.diagnostics = e.what();
    } catch (const std::invalid_argument& e) {
        out.exit_code = kExitUsage;
        out.diagnostics = e.what();
    }
    return out;
}

}  // namespace krein

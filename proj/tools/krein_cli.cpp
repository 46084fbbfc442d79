#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "krein/campaign.hpp"

namespace {

struct Flag {
    const char* name;
    const char* help;
};

// Every flag maps onto a config key: "--t-min" sets "t_min".
const Flag kShared[] = {
    {"seed", "master seed"},
    {"n", "matrix dimension for generated operators"},
    {"trials", "number of seeded trials"},
    {"tol", "pass/fail tolerance"},
    {"threads", "worker threads (output does not depend on this)"},
};

const std::map<std::string, std::vector<Flag>> kSpecific{
    {"trace-check", {{"f", "catalog name or poly:[c0,c1,...]"}, {"nodes", "Gauss-Legendre nodes per interval"},
                     {"domain", "function domain lo,hi"}, {"lo", "spectral interval lower end"},
                     {"hi", "spectral interval upper end"}, {"a", "matrix file for A"}, {"b", "matrix file for B"}}},
    {"xi", {{"f", "function whose domain sets the spectral interval"}, {"a", "matrix file for A"},
            {"b", "matrix file for B"}, {"lo", "spectral interval lower end"}, {"hi", "spectral interval upper end"}}},
    {"doi-check", {{"f", "catalog name or poly:[...]"}, {"domain", "function domain lo,hi"},
                   {"a", "matrix file for A"}, {"b", "matrix file for B"}}},
    {"mult-norm", {{"kernel", "real kernel matrix file"}, {"f", "function for Loewner-kernel sweeps"},
                   {"grid", "uniform | geometric"}, {"points", "grid size"}, {"sizes", "comma-separated grid sizes"},
                   {"domain", "function domain lo,hi"}}},
    {"ol-growth", {{"f", "function (default abs)"}, {"kmax", "deepest geometric grid level"},
                   {"domain", "function domain lo,hi"}}},
    {"path-check", {{"f", "catalog name or poly:[...]"}, {"depth", "maximum quadrature depth"},
                    {"bins", "density histogram bins"}, {"fd-steps", "comma-separated finite-difference steps"},
                    {"t", "path time for the derivative check"}, {"a", "matrix file for A"},
                    {"b", "matrix file for B"}, {"domain", "function domain lo,hi"}}},
    {"nu-density", {{"depth", "time quadrature depth"}, {"bins", "histogram bins"}, {"a", "matrix file for A"},
                    {"b", "matrix file for B"}, {"lo", "spectral interval lower end"},
                    {"hi", "spectral interval upper end"}}},
    {"translate", {{"f", "catalog name or poly:[...]"}, {"t-min", "first shift"}, {"t-max", "last shift"},
                   {"t-steps", "number of shifts"}, {"a", "matrix file for A"}, {"b", "matrix file for B"},
                   {"domain", "function domain lo,hi"}, {"lo", "spectral interval lower end"},
                   {"hi", "spectral interval upper end"}}},
};

const std::map<std::string, const char*> kDescriptions{
    {"trace-check", "trace(f(A) - f(B)) against the integral of f' xi over seeded pairs (JSON)"},
    {"xi", "spectral shift function of a pair as breakpoints and values (CSV)"},
    {"doi-check", "DOI representation of f(A) - f(B) and the S2 Lipschitz bound (JSON)"},
    {"mult-norm", "certified Schur multiplier norms of a kernel or Loewner grids (CSV)"},
    {"ol-growth", "multiplier norms of Loewner matrices on geometric grids (CSV)"},
    {"path-check", "Bochner residuals, finite-difference derivative and nu vs -xi (JSON)"},
    {"nu-density", "binned density of the time-averaged nu against -xi (CSV)"},
    {"translate", "trace(f(A - tI) - f(B - tI)) over a range of shifts (CSV)"},
};

std::string key_of(std::string flag) {
    for (char& ch : flag)
        if (ch == '-') ch = '_';
    return flag;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral shift, double operator integral and Schur multiplier experiments"};
    app.require_subcommand(1);

    struct Bound {
        CLI::App* sub;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
        std::string out, config;
    };
    std::vector<std::unique_ptr<Bound>> bound;

    for (const auto& name : krein::command_names()) {
        auto b = std::make_unique<Bound>();
        b->sub = app.add_subcommand(name, kDescriptions.at(name));
        b->sub->add_option("--out", b->out, "write the CSV/JSON artifact here instead of stdout");
        b->sub->add_option("--config", b->config, "flat key = value config file");
        auto add = [&](const Flag& f) {
            const std::string key = key_of(f.name);
            b->options[key] = b->sub->add_option(std::string("--") + f.name, b->values[key], f.help);
        };
        for (const auto& f : kShared) add(f);
        for (const auto& f : kSpecific.at(name)) add(f);
        bound.push_back(std::move(b));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return krein::kExitUsage;
    }

    for (const auto& b : bound) {
        if (!b->sub->parsed()) continue;
        krein::CommandOutput result;
        try {
            krein::Config config = b->config.empty() ? krein::Config{} : krein::Config::from_file(b->config);
            for (const auto& [key, opt] : b->options)
                if (opt->count() > 0) config.set(key, b->values[key]);
            result = krein::run_command(b->sub->get_name(), config);
        } catch (const krein::ConfigError& e) {
            result.exit_code = krein::kExitUsage;
            result.diagnostics = e.what();
        }
        if (!result.artifact.empty()) {
            if (b->out.empty()) {
                std::cout << result.artifact;
            } else {
                std::ofstream out(b->out, std::ios::binary);
                out << result.artifact;
                if (!out) {
                    std::cerr << "cannot write " << b->out << "\n";
                    return krein::kExitUsage;
                }
            }
        }
        if (!result.diagnostics.empty()) std::cerr << result.diagnostics << "\n";
        return result.exit_code;
    }
    return krein::kExitUsage;
}

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace krein {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Flat `key = value` configuration; '#' starts a comment. Later set() calls
// override earlier values, so command-line flags are applied after the file.
class Config {
public:
    static Config parse(const std::string& text);
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    unsigned threads() const;

private:
    std::map<std::string, std::string> values_;
};

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

struct CommandOutput {
    int exit_code = kExitOk;
    std::string artifact;     // CSV or JSON, byte-stable for a given config
    std::string diagnostics;  // human-readable notes for stderr
};

// Subcommands: trace-check, xi, doi-check, mult-norm, ol-growth, path-check,
// nu-density, translate. Unknown names and bad configs give kExitUsage.
CommandOutput run_command(const std::string& name, const Config& config);
const std::vector<std::string>& command_names();

CommandOutput cmd_trace_check(const Config& config);
CommandOutput cmd_xi(const Config& config);
CommandOutput cmd_doi_check(const Config& config);
CommandOutput cmd_mult_norm(const Config& config);
CommandOutput cmd_ol_growth(const Config& config);
CommandOutput cmd_path_check(const Config& config);
CommandOutput cmd_nu_density(const Config& config);
CommandOutput cmd_translate(const Config& config);

// Fixed 17-significant-digit rendering used by every writer.
std::string format_double(double v);

}  // namespace krein

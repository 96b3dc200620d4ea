#pragma once

// Configuration, CSV and run-report plumbing for the CLI.

#include "wst/scatter.hpp"
#include "wst/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wst::report {

using json = nlohmann::json;

/// Flat key=value experiment configuration; CLI flags override file values.
struct ExperimentConfig {
    std::string experiment;
    int n = 3;
    int q = 1;
    double kd = pi;
    double kd0 = pi / 2.0;
    double Gamma = 1000.0;
    double Omega = 1e-4;
    std::string strategy = "min-backward";
    long max_electrons = 10'000'000;
    double fidelity_threshold = 0.999;
    std::filesystem::path out_dir = ".";
    unsigned long seed = 0;  // reserved; all paths are deterministic
    bool fast = false;

    scatter::ChannelConfig channel() const;
    void apply(const std::map<std::string, std::string>& kv);
};

/// Parse an INI-style flat key=value file ('#' comments, blank lines ok).
std::map<std::string, std::string> load_config_file(const std::filesystem::path& path);

/// Default output directory: $WST_OUT_DIR or ".".
std::filesystem::path default_out_dir();

/// Format a double with 17 significant digits (round-trip exact).
std::string full_precision(double v);

/// Write a CSV file: one header row, then rows of full-precision values.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct Check {
    std::string name;
    bool pass;
    double value;
    double threshold;
    std::string note;  // e.g. "qualitative"
};

struct RunReport {
    std::string experiment;
    json inputs;
    json metrics;
    std::vector<Check> checks;
    double wall_time_s = 0.0;

    bool all_pass() const;
    json to_json() const;
    void write(const std::filesystem::path& path) const;
};

}  // namespace wst::report

#include "wst/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wst::report {

scatter::ChannelConfig ExperimentConfig::channel() const {
    scatter::ChannelConfig cfg;
    cfg.n = n;
    cfg.kd = kd;
    cfg.kd0 = kd0;
    cfg.Gamma = Gamma;
    cfg.Omega = Omega;
    return cfg;
}

void ExperimentConfig::apply(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "experiment") experiment = value;
        else if (key == "n") n = std::stoi(value);
        else if (key == "q") q = std::stoi(value);
        else if (key == "kd") kd = std::stod(value);
        else if (key == "kd0") kd0 = std::stod(value);
        else if (key == "gamma") Gamma = std::stod(value);
        else if (key == "omega") Omega = std::stod(value);
        else if (key == "strategy") strategy = value;
        else if (key == "max_electrons") max_electrons = std::stol(value);
        else if (key == "fidelity_threshold") fidelity_threshold = std::stod(value);
        else if (key == "out") out_dir = value;
        else if (key == "seed") seed = std::stoul(value);
        else if (key == "fast") fast = value == "1" || value == "true";
        else throw std::invalid_argument("unknown config key: " + key);
    }
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (fidelity_threshold <= 0.0) throw std::invalid_argument("config: tolerances must be positive");
}

std::map<std::string, std::string> load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("WST_OUT_DIR")) return env;
    return ".";
}

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << full_precision(row[i]);
        out << "\n";
    }
}

bool RunReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

json RunReport::to_json() const {
    json j;
    j["experiment"] = experiment;
    j["inputs"] = inputs;
    j["metrics"] = metrics;
    j["checks"] = json::array();
    for (const auto& c : checks) {
        json jc{{"name", c.name}, {"pass", c.pass}, {"value", c.value},
                {"threshold", c.threshold}};
        if (!c.note.empty()) jc["note"] = c.note;
        j["checks"].push_back(jc);
    }
    j["all_pass"] = all_pass();
    j["wall_time_s"] = wall_time_s;
    return j;
}

void RunReport::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json().dump(2) << "\n";
}

}  // namespace wst::report

#include "wst/report.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace wst;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("load_config_file: flat key=value with comments") {
    const auto path = temp_file("wst_cfg_test.ini");
    {
        std::ofstream out(path);
        out << "# run setup\n"
            << "experiment = evolve\n"
            << "n=5\n"
            << "  omega = 2e-4   # exchange\n"
            << "\n"
            << "fast = true\n";
    }
    const auto kv = report::load_config_file(path);
    CHECK(kv.at("experiment") == "evolve");
    CHECK(kv.at("n") == "5");
    CHECK(kv.at("omega") == "2e-4");
    CHECK(kv.at("fast") == "true");
    CHECK(kv.size() == 4);

    CHECK_THROWS_AS(report::load_config_file(temp_file("wst_missing.ini")), std::runtime_error);
}

TEST_CASE("ExperimentConfig::apply: typed assignment and validation") {
    report::ExperimentConfig cfg;
    cfg.apply({{"n", "7"}, {"q", "2"}, {"gamma", "500"}, {"strategy", "max-forward"},
               {"max_electrons", "12345"}, {"fast", "1"}});
    CHECK(cfg.n == 7);
    CHECK(cfg.q == 2);
    CHECK(cfg.Gamma == doctest::Approx(500.0));
    CHECK(cfg.strategy == "max-forward");
    CHECK(cfg.max_electrons == 12345);
    CHECK(cfg.fast);

    CHECK_THROWS_AS(cfg.apply({{"granma", "500"}}), std::invalid_argument);
    CHECK_THROWS_AS(cfg.apply({{"n", "0"}}), std::invalid_argument);
    CHECK_THROWS_AS(cfg.apply({{"fidelity_threshold", "-1"}}), std::invalid_argument);
}

TEST_CASE("full_precision round-trips doubles") {
    for (double v : {1.0 / 3.0, 6.0606e-4, 1e-17, -2.718281828459045, 0.0, 1e300}) {
        const std::string s = report::full_precision(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("write_csv is deterministic byte for byte") {
    const std::vector<std::string> header{"a", "b"};
    const std::vector<std::vector<double>> rows{{1.0 / 3.0, 2.0}, {6.0606e-4, -1e-17}};
    const auto p1 = temp_file("wst_csv_1.csv"), p2 = temp_file("wst_csv_2.csv");
    report::write_csv(p1, header, rows);
    report::write_csv(p2, header, rows);
    const std::string c1 = slurp(p1);
    CHECK(c1 == slurp(p2));
    CHECK(c1.substr(0, 4) == "a,b\n");
    CHECK(c1.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("default_out_dir honors the environment") {
    unsetenv("WST_OUT_DIR");
    CHECK(report::default_out_dir() == std::filesystem::path("."));
    setenv("WST_OUT_DIR", "/tmp/wst_env_test", 1);
    CHECK(report::default_out_dir() == std::filesystem::path("/tmp/wst_env_test"));
    unsetenv("WST_OUT_DIR");
}

TEST_CASE("RunReport: pass logic and JSON round trip") {
    report::RunReport rep;
    rep.experiment = "unit";
    rep.inputs = {{"n", 3}};
    rep.metrics = {{"fidelity", 0.9995}};
    rep.checks.push_back({"alpha", true, 1e-12, 1e-10, ""});
    CHECK(rep.all_pass());
    rep.checks.push_back({"beta", false, 2e-10, 1e-10, "too large"});
    CHECK_FALSE(rep.all_pass());

    const auto path = temp_file("wst_report_test.json");
    rep.write(path);
    const auto j = report::json::parse(slurp(path));
    CHECK(j["experiment"] == "unit");
    CHECK(j["all_pass"] == false);
    REQUIRE(j["checks"].size() == 2);
    CHECK(j["checks"][1]["note"] == "too large");
    CHECK(j["metrics"]["fidelity"] == doctest::Approx(0.9995));
}

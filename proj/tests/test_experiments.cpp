#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "geomphase/cli.hpp"
#include "geomphase/core.hpp"
#include "geomphase/errors.hpp"
#include "geomphase/experiments.hpp"
#include "geomphase/svg.hpp"

using namespace geomphase;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("geomphase_test_" + tag);
    fs::remove_all(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

int run_cli(std::initializer_list<const char*> args, std::string* stdout_text = nullptr) {
    std::vector<const char*> argv = {"geomphase"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    const int code = cli_main(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    if (stdout_text) *stdout_text = captured.str();
    return code;
}

}  // namespace

TEST_CASE("the registry names every experiment once") {
    const auto& reg = experiment_registry();
    REQUIRE(reg.size() == 8);
    const std::vector<std::string> expected = {"fig3a", "fig3b", "fig3c", "fig3d",
                                               "fig4a", "fig4b", "fig4c", "oracle-check"};
    for (const std::string& name : expected) {
        const ExperimentInfo& info = experiment_info(name);
        CHECK(info.name == name);
        CHECK_FALSE(info.summary.empty());
        CHECK(info.config_overlay.count("delta_mhz") == 1);
    }
    CHECK_THROWS_AS(experiment_info("fig9z"), validation_error);
}

TEST_CASE("make_experiment layers overlay, config file, and overrides") {
    // Registry overlay alone.
    const ExperimentSpec base = make_experiment("fig4c", "", {}, "out", 0);
    CHECK(base.config.get_double("duration_ns", 0.0) == doctest::Approx(30.0));
    CHECK(base.config.get_double("eps0_mhz", 0.0) == doctest::Approx(190.0));
    CHECK(base.params().delta == doctest::Approx(to_angular(40.0)).epsilon(1e-14));

    // A config file overrides the overlay.
    const ExperimentSpec filed = make_experiment("fig4c", "duration_ns = 99", {}, "out", 0);
    CHECK(filed.config.get_double("duration_ns", 0.0) == doctest::Approx(99.0));

    // --set overrides both, and may address grid keys.
    const ExperimentSpec set = make_experiment(
        "fig3a", "duration_ns = 99", {{"duration_ns", "123"}, {"t_step_ns", "50"}}, "out", 2);
    CHECK(set.config.get_double("duration_ns", 0.0) == doctest::Approx(123.0));
    CHECK(set.grid.at("t_step_ns") == "50");
    CHECK(set.grid.at("t_start_ns") == "30");
    CHECK(set.jobs == 2);

    CHECK_THROWS_AS(make_experiment("fig4c", "", {{"t_start_ns", "10"}}, "out", 0),
                    validation_error);  // fig4c has no grid keys
    CHECK_THROWS_AS(make_experiment("fig4c", "", {{"detuning", "40"}}, "out", 0),
                    validation_error);
    CHECK_THROWS_AS(make_experiment("fig4c", "delta_mhz", {}, "out", 0), config_error);
}

TEST_CASE("fig4c writes a self-describing table and chart") {
    const std::string dir = fresh_dir("fig4c");
    const ExperimentSpec spec = make_experiment("fig4c", "", {{"samples", "256"}}, dir, 0);
    const ExperimentResult res = run_experiment(spec);

    REQUIRE(res.files_written.size() == 3);
    CHECK(fs::exists(dir + "/fig4c.csv"));
    CHECK(fs::exists(dir + "/fig4c.json"));
    CHECK(fs::exists(dir + "/fig4c.svg"));

    const std::string csv = slurp(dir + "/fig4c.csv");
    CHECK(csv.rfind("# geomphase v1\n", 0) == 0);
    CHECK(csv.find("# experiment=fig4c\n") != std::string::npos);
    CHECK(csv.find("# eps0_mhz=190\n") != std::string::npos);
    CHECK(csv.find("t_ns,re_alpha_g,im_alpha_g,theta_g,re_alpha_e,im_alpha_e,theta_e\n") !=
          std::string::npos);

    const nlohmann::json doc = nlohmann::json::parse(slurp(dir + "/fig4c.json"));
    CHECK(doc.at("x").size() == 257);
    CHECK(doc.at("metadata").at("experiment") == "fig4c");
    CHECK(doc.at("metadata").count("r_final") == 1);

    const std::string svg = slurp(dir + "/fig4c.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("alpha_g_adiabatic") != std::string::npos);
}

TEST_CASE("reruns and worker counts do not change the output bytes") {
    const std::string dir1 = fresh_dir("rerun1");
    const std::string dir2 = fresh_dir("rerun2");
    const std::vector<std::pair<std::string, std::string>> small = {
        {"eps0_start_mhz", "100"}, {"eps0_stop_mhz", "300"}, {"eps0_step_mhz", "50"},
        {"samples", "512"}};

    run_experiment(make_experiment("fig3c", "", small, dir1, 1));
    run_experiment(make_experiment("fig3c", "", small, dir2, 3));
    CHECK(slurp(dir1 + "/fig3c.csv") == slurp(dir2 + "/fig3c.csv"));
    CHECK(slurp(dir1 + "/fig3c.json") == slurp(dir2 + "/fig3c.json"));
    CHECK(slurp(dir1 + "/fig3c.svg") == slurp(dir2 + "/fig3c.svg"));
}

TEST_CASE("fig3c regression ties phase to enclosed area with slope -2") {
    const std::string dir = fresh_dir("fig3c_slope");
    const ExperimentResult res = run_experiment(make_experiment(
        "fig3c", "",
        {{"eps0_start_mhz", "100"}, {"eps0_stop_mhz", "300"}, {"eps0_step_mhz", "50"}},
        dir, 0));
    const double slope = std::stod(res.table.metadata.at("slope_gamma_vs_area"));
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.02));
    // Opposite orientations sit on opposite sides of zero.
    const auto& ccw = res.table.column("gamma_g_ccw").values;
    const auto& cw = res.table.column("gamma_g_cw").values;
    for (std::size_t i = 0; i < ccw.size(); ++i) {
        CHECK(ccw[i] < 0.0);
        CHECK(cw[i] > 0.0);
    }
}

TEST_CASE("fig3b chart carries measured points and fitted lines") {
    const std::string dir = fresh_dir("fig3b");
    const ExperimentResult res = run_experiment(make_experiment(
        "fig3b", "",
        {{"t_start_ns", "100"}, {"t_stop_ns", "200"}, {"t_step_ns", "20"},
         {"fit_order", "1"}, {"samples", "1024"}},
        dir, 0));
    CHECK(res.table.columns.size() == 4);
    CHECK(res.table.metadata.count("gamma_infinity_ccw") == 1);

    const std::string svg = slurp(dir + "/fig3b.svg");
    CHECK(svg.find("gamma_g_ccw") != std::string::npos);
    CHECK(svg.find("gamma_g_ccw_fit") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);    // measured points
    CHECK(svg.find("<polyline") != std::string::npos);  // fitted curve
}

TEST_CASE("experiments reject a straight drive shape") {
    CHECK_THROWS_AS(
        run_experiment(make_experiment("fig3a", "shape = straight", {}, "out", 0)),
        validation_error);
}

TEST_CASE("cli lists experiments") {
    std::string text;
    CHECK(run_cli({"list"}, &text) == 0);
    CHECK(text.find("fig3a") != std::string::npos);
    CHECK(text.find("oracle-check") != std::string::npos);
}

TEST_CASE("cli maps failures onto exit codes") {
    const std::string dir = fresh_dir("cli_fail");
    CHECK(run_cli({"run", "fig9z", "--out", dir.c_str()}) == 1);
    CHECK(run_cli({"run", "fig4c", "--config", "/nonexistent.cfg", "--out", dir.c_str()}) == 1);
    CHECK(run_cli({"run", "fig4c", "--set", "nope=1", "--out", dir.c_str()}) == 1);
    CHECK(run_cli({"run", "fig4c", "--set", "duration_ns", "--out", dir.c_str()}) == 1);
    CHECK(run_cli({"run"}) == 1);  // missing the experiment name

    // Too small a number basis is an oracle failure, not a usage error.
    CHECK(run_cli({"oracle-check", "--set", "n_truncation=20", "--set", "t_list_ns=30",
                   "--out", dir.c_str()}) == 2);
}

TEST_CASE("cli oracle-check prints the report as JSON") {
    const std::string dir = fresh_dir("cli_oracle");
    std::string text;
    const int code = run_cli({"oracle-check", "--set", "t_list_ns=30",
                              "--set", "samples=512", "--out", dir.c_str()}, &text);
    CHECK(code == 0);
    const nlohmann::json doc = nlohmann::json::parse(text);
    CHECK(doc.at("metadata").at("thresholds_pass") == "true");
    CHECK(doc.at("columns").at("fidelity_g")[0].get<double>() > 0.999);
    CHECK(fs::exists(dir + "/oracle-check.csv"));
    CHECK_FALSE(fs::exists(dir + "/oracle-check.svg"));
}

TEST_CASE("cli falls back to GEOMPHASE_OUT for the output directory") {
    const std::string dir = fresh_dir("cli_env");
    REQUIRE(setenv("GEOMPHASE_OUT", dir.c_str(), 1) == 0);
    const int code = run_cli({"run", "fig4c", "--set", "samples=256"});
    REQUIRE(unsetenv("GEOMPHASE_OUT") == 0);
    CHECK(code == 0);
    CHECK(fs::exists(dir + "/fig4c.csv"));
}

TEST_CASE("render_chart output is deterministic") {
    XYSeries s;
    s.label = "demo";
    s.x = {0.0, 1.0, 2.0};
    s.y = {1.0, -1.0, 0.5};
    s.style = XYSeries::Style::Scatter;
    const std::string a = render_chart({s}, {"title", "x", "y"}, {{"key", "value"}});
    const std::string b = render_chart({s}, {"title", "x", "y"}, {{"key", "value"}});
    CHECK(a == b);
    CHECK(a.find("key=value") != std::string::npos);
}

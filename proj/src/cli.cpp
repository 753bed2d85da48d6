#include "geomphase/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "geomphase/errors.hpp"
#include "geomphase/experiments.hpp"
#include "geomphase/version.hpp"

namespace geomphase {

namespace {

std::string read_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw io_error("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::vector<std::pair<std::string, std::string>> parse_sets(const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(sets.size());
    for (const std::string& s : sets) {
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw validation_error("--set expects key=value, got '" + s + "'");
        }
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

std::string default_out_dir() {
    const char* env = std::getenv("GEOMPHASE_OUT");
    return env && *env ? env : "out";
}

int run_named(const std::string& name, const std::string& config_path,
              const std::string& out_dir, const std::vector<std::string>& sets,
              std::size_t jobs) {
    const std::string config_text = config_path.empty() ? "" : read_config_file(config_path);
    const ExperimentSpec spec = make_experiment(name, config_text, parse_sets(sets), out_dir, jobs);
    const ExperimentResult result = run_experiment(spec);
    if (name == "oracle-check") {
        // The cross-check report goes to stdout; thresholds decide the exit.
        std::cout << result.table.to_json();
        if (result.table.metadata.at("thresholds_pass") != "true") {
            return 2;
        }
        return 0;
    }
    for (const std::string& file : result.files_written) {
        std::cout << "wrote " << file << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"driven-resonator phase simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CLI::App* list_cmd = app.add_subcommand("list", "list the available experiments");

    std::string name;
    std::string config_path;
    std::string out_dir = default_out_dir();
    std::vector<std::string> sets;
    std::size_t jobs = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment and write its outputs");
    run_cmd->add_option("experiment", name, "experiment name (see 'list')")->required();
    run_cmd->add_option("--config", config_path, "configuration file");
    run_cmd->add_option("--out", out_dir, "output directory (default: $GEOMPHASE_OUT or 'out')");
    run_cmd->add_option("--set", sets, "override a config or grid key (key=value)");
    run_cmd->add_option("--jobs", jobs, "worker threads (0 = auto)");

    CLI::App* oracle_cmd =
        app.add_subcommand("oracle-check", "cross-check the solvers and print a JSON report");
    oracle_cmd->add_option("--config", config_path, "configuration file");
    oracle_cmd->add_option("--out", out_dir, "output directory (default: $GEOMPHASE_OUT or 'out')");
    oracle_cmd->add_option("--set", sets, "override a config or grid key (key=value)");
    oracle_cmd->add_option("--jobs", jobs, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);

        if (list_cmd->parsed()) {
            for (const ExperimentInfo& info : experiment_registry()) {
                std::cout << info.name << "  " << info.summary << "\n";
            }
            return 0;
        }
        if (oracle_cmd->parsed()) {
            return run_named("oracle-check", config_path, out_dir, sets, jobs);
        }
        return run_named(name, config_path, out_dir, sets, jobs);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const oracle_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace geomphase

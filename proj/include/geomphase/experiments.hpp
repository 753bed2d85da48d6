#pragma once

// Named experiments: each one runs a parameter sweep (or a single pulse),
// collects a SweepTable and writes <name>.csv / <name>.json / <name>.svg
// into the output directory.  Every output embeds the resolved
// configuration, so results are self-describing and reruns are
// byte-identical.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geomphase/analysis.hpp"
#include "geomphase/core.hpp"

namespace geomphase {

struct ExperimentInfo {
    std::string name;
    std::string summary;
    // Config keys this experiment pins over the base defaults.
    std::map<std::string, std::string> config_overlay;
    // Sweep-grid keys with defaults; overridable via --set only.
    std::map<std::string, std::string> grid_defaults;
};

const std::vector<ExperimentInfo>& experiment_registry();
// validation_error if the name is not registered.
const ExperimentInfo& experiment_info(const std::string& name);

struct ExperimentSpec {
    std::string name;
    ConfigDoc config;                          // resolved 8-key configuration
    std::map<std::string, std::string> grid;   // resolved grid values
    std::string out_dir;
    std::size_t jobs = 0;                      // 0 = hardware default

    SystemParams params() const;
};

// Resolve an experiment: registry overlay, then the config file text, then
// --set overrides (which may address config keys or grid keys).  Unknown
// override keys are rejected with the list of valid ones.
ExperimentSpec make_experiment(const std::string& name, const std::string& config_text,
                               const std::vector<std::pair<std::string, std::string>>& overrides,
                               const std::string& out_dir, std::size_t jobs);

struct ExperimentResult {
    SweepTable table;
    std::vector<std::string> files_written;
};

// Run the sweep and write the output files.  Sweep points are computed in
// parallel but merged in grid order, so the files do not depend on the
// worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace geomphase

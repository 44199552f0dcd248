#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "detsim/engine.hpp"
#include "detsim/scenario.hpp"

namespace detsim {

// A named network source: either a built-in preset or an inline network
// parsed from the configuration file.
struct ScenarioSpec {
    std::string name;
    std::optional<ScenarioPreset> preset;
    std::shared_ptr<const Network> network;

    Network build() const;
};

ScenarioSpec scenario_from_name(const std::string& name);

struct ExperimentSpec {
    std::vector<ScenarioSpec> scenarios;
    std::vector<RuleKind> rules;
    std::size_t trials = 100;
    std::uint64_t master_seed = 42;
    double threshold = 1e-3;
    std::size_t max_rounds = 100000;
    // Empty means: $DETSIM_OUTPUT_DIR if set, else ./detsim-out.
    std::string output_dir;
    bool emit_trajectories = false;

    void validate() const;
};

// Both benchmark placements, all six rules, 100 trials.
ExperimentSpec default_experiment_spec();

// JSON configuration file; unknown keys are rejected. See README for the schema.
ExperimentSpec load_experiment_spec(const std::filesystem::path& config_path);

std::filesystem::path resolve_output_dir(const ExperimentSpec& spec);

// Runs every scenario × rule cell with paired per-trial seeds, writes
// results.csv and summary.json under the output directory (plus per-trial
// trajectory files when requested), prints condition warnings to err and a
// comparison table to out. Returns a process exit status instead of throwing.
int run_experiment_spec(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace detsim

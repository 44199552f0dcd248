#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "detsim/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "detsim: distributed detection on agent networks, six consensus-plus-Bayes "
        "update rules compared by rounds to collective detection"};

    std::string config_path;
    std::vector<std::string> rule_names;
    std::vector<std::string> scenario_names;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> threshold;
    std::optional<std::size_t> max_rounds;
    std::string output_dir;
    bool trajectories = false;

    app.add_option("--config", config_path, "JSON experiment configuration file");
    app.add_option("--rule", rule_names,
                   "Rule to run (repeatable): LoAB, LiAB, BLoA, BLiA, BLiAD, BLoAD");
    app.add_option("--scenario", scenario_names,
                   "Scenario preset to run (repeatable): clustered, mixed");
    app.add_option("--trials", trials, "Trials per scenario/rule cell");
    app.add_option("--seed", seed, "Master seed for paired per-trial seed derivation");
    app.add_option("--threshold", threshold, "Detection threshold on |belief(true) - 1|");
    app.add_option("--max-rounds", max_rounds, "Round cap per trial");
    app.add_option("--output", output_dir,
                   "Output directory (default: $DETSIM_OUTPUT_DIR or ./detsim-out)");
    app.add_flag("--trajectories", trajectories, "Also dump per-trial belief trajectories");

    CLI11_PARSE(app, argc, argv);

    try {
        detsim::ExperimentSpec spec = config_path.empty()
                                          ? detsim::default_experiment_spec()
                                          : detsim::load_experiment_spec(config_path);
        // Flags override config-file values.
        if (!rule_names.empty()) {
            spec.rules.clear();
            for (const std::string& name : rule_names) {
                spec.rules.push_back(detsim::rule_from_string(name));
            }
        }
        if (!scenario_names.empty()) {
            spec.scenarios.clear();
            for (const std::string& name : scenario_names) {
                spec.scenarios.push_back(detsim::scenario_from_name(name));
            }
        }
        if (trials) spec.trials = *trials;
        if (seed) spec.master_seed = *seed;
        if (threshold) spec.threshold = *threshold;
        if (max_rounds) spec.max_rounds = *max_rounds;
        if (!output_dir.empty()) spec.output_dir = output_dir;
        if (trajectories) spec.emit_trajectories = true;

        return detsim::run_experiment_spec(spec, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

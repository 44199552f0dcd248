#include "detsim/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>

#include <json.hpp>

namespace detsim {

namespace {

using json = nlohmann::ordered_json;

std::string fmt_double(double v, const char* spec = "%.17g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

Network network_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: network must be an object");
    }
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        if (key != "states" && key != "true_state" && key != "signals" &&
            key != "weights" && key != "agents") {
            throw std::invalid_argument("config: unknown network key '" + key + "'");
        }
    }
    std::vector<std::string> labels = j.at("states").get<std::vector<std::string>>();
    std::string true_label = j.at("true_state").get<std::string>();
    auto it = std::find(labels.begin(), labels.end(), true_label);
    if (it == labels.end()) {
        throw std::invalid_argument("config: true_state '" + true_label + "' not in states");
    }
    StateSpace states(labels, static_cast<std::size_t>(it - labels.begin()));

    std::vector<std::string> alphabet = j.at("signals").get<std::vector<std::string>>();
    WeightMatrix weights = j.at("weights").get<WeightMatrix>();

    std::vector<SignalModel> models;
    for (const json& agent : j.at("agents")) {
        auto table = agent.at("likelihood").get<std::vector<std::vector<double>>>();
        models.push_back(SignalModel(alphabet, std::move(table)));
    }
    return Network(std::move(states), std::move(weights), std::move(models));
}

ScenarioSpec scenario_from_json(const json& j) {
    if (j.is_string()) {
        return scenario_from_name(j.get<std::string>());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config: scenario entries must be names or objects");
    }
    ScenarioSpec spec;
    spec.name = j.at("name").get<std::string>();
    if (j.contains("network")) {
        spec.network = std::make_shared<Network>(network_from_json(j.at("network")));
        return spec;
    }
    ScenarioPreset preset;
    preset.name = spec.name;
    if (j.contains("n")) {
        preset.n = j.at("n").get<std::size_t>();
    }
    if (j.contains("k")) {
        preset.k = j.at("k").get<std::size_t>();
    }
    spec.preset = preset;
    return spec;
}

struct CellResult {
    std::string scenario;
    std::string rule;
    ExperimentSummary summary;
};

void write_csv(const std::filesystem::path& path, const std::vector<CellResult>& cells) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "rule,scenario,trial,seed,converged,rounds\n";
    for (const CellResult& cell : cells) {
        for (const TrialRecord& r : cell.summary.records) {
            out << cell.rule << ',' << cell.scenario << ',' << r.index << ',' << r.seed << ','
                << (r.converged ? "true" : "false") << ',' << r.rounds << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void write_summary_json(const std::filesystem::path& path, const ExperimentSpec& spec,
                        const std::vector<CellResult>& cells) {
    json doc;
    doc["master_seed"] = spec.master_seed;
    doc["threshold"] = spec.threshold;
    doc["max_rounds"] = spec.max_rounds;
    doc["trials"] = spec.trials;
    doc["cells"] = json::array();
    for (const CellResult& cell : cells) {
        json c;
        c["rule"] = cell.rule;
        c["scenario"] = cell.scenario;
        c["trials"] = cell.summary.trials;
        c["converged_trials"] = cell.summary.converged_trials;
        c["convergence_fraction"] = cell.summary.convergence_fraction;
        c["rounds_mean"] = cell.summary.mean_rounds;  // null when nothing converged
        c["rounds_std"] = cell.summary.std_rounds;
        c["rounds_min"] = cell.summary.min_rounds;
        c["rounds_max"] = cell.summary.max_rounds;
        doc["cells"].push_back(std::move(c));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void write_trajectory(const std::filesystem::path& path, const Network& net,
                      const TrialResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "round,agent";
    for (const std::string& label : net.states().labels()) {
        out << ',' << label;
    }
    out << '\n';
    for (std::size_t t = 0; t < result.trajectory.size(); ++t) {
        for (std::size_t i = 0; i < result.trajectory[t].size(); ++i) {
            out << t << ',' << i;
            for (std::size_t s = 0; s < result.trajectory[t][i].size(); ++s) {
                out << ',' << fmt_double(result.trajectory[t][i][s]);
            }
            out << '\n';
        }
    }
}

void warn_failed_conditions(std::ostream& err, const std::string& scenario,
                            const Network& net, RuleKind rule, std::uint64_t seed0) {
    // Representative check against the first trial's initial beliefs; the
    // verdict is advisory, never fatal.
    Rng rng(seed0);
    std::vector<Belief> beliefs = sample_initial_beliefs(rng, net.size(), net.states().size());
    for (const ConditionReport& report : check_conditions(net, rule, beliefs)) {
        if (report.overall || report.informational) {
            continue;
        }
        for (const ClauseVerdict& clause : report.clauses) {
            if (!clause.pass) {
                err << "warning: " << scenario << "/" << to_string(rule) << ": condition "
                    << report.condition_id << " clause '" << clause.clause
                    << "' fails: " << clause.diagnostic << "\n";
            }
        }
    }
}

void print_table(std::ostream& out, const std::vector<CellResult>& cells) {
    out << std::left << std::setw(12) << "scenario" << std::setw(8) << "rule" << std::right
        << std::setw(10) << "mean" << std::setw(10) << "std" << std::setw(8) << "min"
        << std::setw(8) << "max" << std::setw(12) << "converged" << "\n";
    for (const CellResult& cell : cells) {
        const ExperimentSummary& s = cell.summary;
        out << std::left << std::setw(12) << cell.scenario << std::setw(8) << cell.rule
            << std::right;
        if (s.converged_trials == 0) {
            out << std::setw(10) << "-" << std::setw(10) << "-" << std::setw(8) << "-"
                << std::setw(8) << "-";
        } else {
            out << std::setw(10) << fmt_double(s.mean_rounds, "%.2f") << std::setw(10)
                << fmt_double(s.std_rounds, "%.2f") << std::setw(8) << s.min_rounds
                << std::setw(8) << s.max_rounds;
        }
        std::string frac =
            std::to_string(s.converged_trials) + "/" + std::to_string(s.trials);
        out << std::setw(12) << frac << "\n";
    }
}

}  // namespace

Network ScenarioSpec::build() const {
    if (network) {
        return *network;
    }
    if (preset) {
        return build_scenario(*preset);
    }
    throw std::invalid_argument("ScenarioSpec '" + name + "' has no preset or network");
}

ScenarioSpec scenario_from_name(const std::string& name) {
    ScenarioSpec spec;
    spec.name = name;
    ScenarioPreset preset;
    preset.name = name;
    spec.preset = preset;
    spec.build();  // validates the name eagerly
    return spec;
}

void ExperimentSpec::validate() const {
    if (scenarios.empty()) {
        throw std::invalid_argument("experiment: at least one scenario required");
    }
    if (rules.empty()) {
        throw std::invalid_argument("experiment: at least one rule required");
    }
    if (trials < 1) {
        throw std::invalid_argument("experiment: trials must be at least 1");
    }
    if (!(threshold > 0.0) || threshold >= 1.0) {
        throw std::invalid_argument("experiment: threshold must be in (0, 1)");
    }
    if (max_rounds < 1) {
        throw std::invalid_argument("experiment: max_rounds must be at least 1");
    }
    for (std::size_t a = 0; a < scenarios.size(); ++a) {
        for (std::size_t b = a + 1; b < scenarios.size(); ++b) {
            if (scenarios[a].name == scenarios[b].name) {
                throw std::invalid_argument("experiment: duplicate scenario name '" +
                                            scenarios[a].name + "'");
            }
        }
    }
}

ExperimentSpec default_experiment_spec() {
    ExperimentSpec spec;
    spec.scenarios = {scenario_from_name("clustered"), scenario_from_name("mixed")};
    spec.rules.assign(kAllRules.begin(), kAllRules.end());
    return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) {
        throw std::invalid_argument("cannot open config file " + config_path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + config_path.string() + ": " +
                                    e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    ExperimentSpec spec = default_experiment_spec();
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        const json& value = item.value();
        if (key == "scenarios") {
            spec.scenarios.clear();
            for (const json& s : value) {
                spec.scenarios.push_back(scenario_from_json(s));
            }
        } else if (key == "rules") {
            spec.rules.clear();
            for (const json& r : value) {
                spec.rules.push_back(rule_from_string(r.get<std::string>()));
            }
        } else if (key == "trials") {
            spec.trials = value.get<std::size_t>();
        } else if (key == "master_seed") {
            spec.master_seed = value.get<std::uint64_t>();
        } else if (key == "threshold") {
            spec.threshold = value.get<double>();
        } else if (key == "max_rounds") {
            spec.max_rounds = value.get<std::size_t>();
        } else if (key == "output_dir") {
            spec.output_dir = value.get<std::string>();
        } else if (key == "emit_trajectories") {
            spec.emit_trajectories = value.get<bool>();
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return spec;
}

std::filesystem::path resolve_output_dir(const ExperimentSpec& spec) {
    if (!spec.output_dir.empty()) {
        return spec.output_dir;
    }
    if (const char* env = std::getenv("DETSIM_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "detsim-out";
}

int run_experiment_spec(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
    try {
        spec.validate();
        const std::filesystem::path out_dir = resolve_output_dir(spec);
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path traj_dir = out_dir / "trajectories";
        if (spec.emit_trajectories) {
            std::filesystem::create_directories(traj_dir);
        }

        std::vector<CellResult> cells;
        for (const ScenarioSpec& scenario : spec.scenarios) {
            Network net = scenario.build();
            for (RuleKind rule : spec.rules) {
                warn_failed_conditions(err, scenario.name, net, rule,
                                       trial_seed(spec.master_seed, 0));
                TrialConfig base(net, rule);
                base.threshold = spec.threshold;
                base.max_rounds = spec.max_rounds;

                std::vector<TrialRecord> records;
                records.reserve(spec.trials);
                for (std::size_t i = 0; i < spec.trials; ++i) {
                    TrialConfig config = base;
                    config.seed = trial_seed(spec.master_seed, i);
                    config.record_trajectory = spec.emit_trajectories;
                    TrialResult result = run_trial(config);
                    records.push_back({i, config.seed, result.converged, result.rounds});
                    if (spec.emit_trajectories) {
                        std::string file = scenario.name + "_" + to_string(rule) + "_trial" +
                                           std::to_string(i) + ".csv";
                        write_trajectory(traj_dir / file, net, result);
                    }
                }
                cells.push_back({scenario.name, to_string(rule),
                                 summarize_trials(std::move(records))});
            }
        }

        for (const CellResult& cell : cells) {
            if (cell.summary.converged_trials < cell.summary.trials) {
                err << "warning: " << cell.scenario << "/" << cell.rule << ": only "
                    << cell.summary.converged_trials << "/" << cell.summary.trials
                    << " trials converged; mean excludes the rest\n";
            }
        }

        const std::filesystem::path csv_path = out_dir / "results.csv";
        const std::filesystem::path json_path = out_dir / "summary.json";
        write_csv(csv_path, cells);
        write_summary_json(json_path, spec, cells);

        print_table(out, cells);
        out << "per-trial results: " << csv_path.string() << "\n";
        out << "summary:           " << json_path.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace detsim

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "detsim/harness.hpp"

namespace py = pybind11;
using namespace detsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distributed detection on agent networks: consensus protocols "
              "combined with Bayesian belief updates.";

    py::register_exception<DegenerateSupportError>(m, "DegenerateSupportError");

    py::class_<StateSpace>(m, "StateSpace")
        .def(py::init<std::vector<std::string>, std::size_t>(), py::arg("labels"),
             py::arg("true_index"))
        .def_property_readonly("labels", &StateSpace::labels)
        .def_property_readonly("true_index", &StateSpace::true_index)
        .def("__len__", &StateSpace::size);

    py::class_<Belief>(m, "Belief")
        .def(py::init<std::vector<double>>(), py::arg("weights"))
        .def_static("uniform", &Belief::uniform, py::arg("m"))
        .def_property_readonly("weights", &Belief::weights)
        .def("__len__", &Belief::size)
        .def("__getitem__", [](const Belief& b, std::size_t i) { return b.at(i); })
        .def("__eq__", [](const Belief& a, const Belief& b) { return a == b; })
        .def("__repr__", [](const Belief& b) {
            std::ostringstream out;
            out << "Belief([";
            for (std::size_t i = 0; i < b.size(); ++i) {
                out << (i ? ", " : "") << b[i];
            }
            out << "])";
            return out.str();
        });

    py::class_<SignalModel>(m, "SignalModel")
        .def(py::init<std::vector<std::string>, std::vector<std::vector<double>>>(),
             py::arg("alphabet"), py::arg("likelihood"))
        .def_property_readonly("alphabet", &SignalModel::alphabet)
        .def_property_readonly("num_states", &SignalModel::num_states)
        .def_property_readonly("num_signals", &SignalModel::num_signals)
        .def("likelihood", &SignalModel::likelihood, py::arg("state"), py::arg("signal"))
        .def("row", &SignalModel::row, py::arg("state"))
        .def("signal_index", &SignalModel::signal_index, py::arg("id"));

    m.def("bayes_update", &bayes_update, py::arg("prior"), py::arg("signal"), py::arg("model"));
    m.def("kl_divergence",
          py::overload_cast<const Belief&, const Belief&>(&kl_divergence), py::arg("p"),
          py::arg("q"));
    m.def("kl_divergence",
          py::overload_cast<const std::vector<double>&, const std::vector<double>&>(
              &kl_divergence),
          py::arg("p"), py::arg("q"));
    m.def("posterior_objective", &posterior_objective, py::arg("candidate"), py::arg("prior"),
          py::arg("signal"), py::arg("model"));
    m.def("solve_posterior_bruteforce", &solve_posterior_bruteforce, py::arg("prior"),
          py::arg("signal"), py::arg("model"), py::arg("grid_step"));
    m.def("linear_mix", &linear_mix, py::arg("beliefs"), py::arg("weights"));
    m.def("geometric_mix", &geometric_mix, py::arg("beliefs"), py::arg("weights"));

    py::enum_<RuleKind>(m, "RuleKind")
        .value("LoAB", RuleKind::LoAB)
        .value("LiAB", RuleKind::LiAB)
        .value("BLoA", RuleKind::BLoA)
        .value("BLiA", RuleKind::BLiA)
        .value("BLiAD", RuleKind::BLiAD)
        .value("BLoAD", RuleKind::BLoAD);
    m.def("rule_from_string", &rule_from_string, py::arg("name"));
    m.def("rule_name", [](RuleKind rule) { return std::string(to_string(rule)); },
          py::arg("rule"));
    m.attr("ALL_RULES") =
        std::vector<RuleKind>(kAllRules.begin(), kAllRules.end());

    py::class_<NeighborhoodView>(m, "NeighborhoodView")
        .def(py::init<>())
        .def_readwrite("self_index", &NeighborhoodView::self_index)
        .def_readwrite("priors", &NeighborhoodView::priors)
        .def_readwrite("weights", &NeighborhoodView::weights)
        .def_readwrite("posteriors", &NeighborhoodView::posteriors);

    m.def("step_loab", &step_loab, py::arg("view"), py::arg("signal"), py::arg("model"));
    m.def("step_liab", &step_liab, py::arg("view"), py::arg("signal"), py::arg("model"));
    m.def("step_bloa", &step_bloa, py::arg("view"));
    m.def("step_bloa_exp_log_form", &step_bloa_exp_log_form, py::arg("view"));
    m.def("step_blia", &step_blia, py::arg("view"));
    m.def("step_bliad", &step_bliad, py::arg("view"), py::arg("signal"), py::arg("model"));
    m.def("step_bload", &step_bload, py::arg("view"), py::arg("signal"), py::arg("model"));
    m.def("step_log_linear", &step_log_linear, py::arg("view"), py::arg("signal"),
          py::arg("model"), py::arg("lambda_"));

    py::class_<Network>(m, "Network")
        .def(py::init<StateSpace, WeightMatrix, std::vector<SignalModel>>(),
             py::arg("states"), py::arg("weights"), py::arg("models"))
        .def_property_readonly("states", &Network::states)
        .def_property_readonly("weights", py::overload_cast<>(&Network::weights, py::const_))
        .def_property_readonly("models", &Network::models)
        .def("model", &Network::model, py::arg("agent"))
        .def("closed_neighborhood", &Network::closed_neighborhood, py::arg("agent"))
        .def("__len__", &Network::size);

    m.def("make_ring_lattice", &make_ring_lattice, py::arg("n"), py::arg("k"));
    m.def("is_strongly_connected",
          py::overload_cast<const Network&>(&is_strongly_connected), py::arg("network"));
    m.def("is_strongly_connected",
          py::overload_cast<const WeightMatrix&>(&is_strongly_connected), py::arg("weights"));
    m.def("is_b_strongly_connected", &is_b_strongly_connected, py::arg("sequence"),
          py::arg("B"));
    m.def("is_primitive", &is_primitive, py::arg("weights"));
    m.def("observationally_equivalent_set", &observationally_equivalent_set,
          py::arg("model"), py::arg("true_index"), py::arg("tol") = 1e-12);
    m.def("is_globally_identifiable", &is_globally_identifiable, py::arg("network"),
          py::arg("tol") = 1e-12);
    m.def("closest_states", &closest_states, py::arg("model"), py::arg("true_likelihoods"),
          py::arg("tol") = 1e-12);

    py::class_<ClauseVerdict>(m, "ClauseVerdict")
        .def_readonly("clause", &ClauseVerdict::clause)
        .def_readonly("pass_", &ClauseVerdict::pass)
        .def_readonly("diagnostic", &ClauseVerdict::diagnostic);

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_readonly("condition_id", &ConditionReport::condition_id)
        .def_readonly("informational", &ConditionReport::informational)
        .def_readonly("clauses", &ConditionReport::clauses)
        .def_readonly("overall", &ConditionReport::overall);

    m.def(
        "check_conditions",
        [](const Network& net, RuleKind rule, const std::vector<Belief>& initial_beliefs,
           std::optional<std::vector<WeightMatrix>> graph_sequence,
           std::optional<std::size_t> B) {
            return check_conditions(net, rule, initial_beliefs,
                                    graph_sequence ? &*graph_sequence : nullptr, B);
        },
        py::arg("network"), py::arg("rule"), py::arg("initial_beliefs"),
        py::arg("graph_sequence") = py::none(), py::arg("B") = py::none());

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform01", &Rng::uniform01)
        .def("exponential", &Rng::exponential);
    m.def("splitmix64", &splitmix64, py::arg("x"));
    m.def("trial_seed", &trial_seed, py::arg("seed_stream"), py::arg("trial_index"));

    py::enum_<InitScheme>(m, "InitScheme")
        .value("SimplexUniform", InitScheme::SimplexUniform)
        .value("NaiveNormalize", InitScheme::NaiveNormalize);

    py::class_<TrialConfig>(m, "TrialConfig")
        .def(py::init<Network, RuleKind>(), py::arg("network"),
             py::arg("rule") = RuleKind::BLoA)
        .def_readwrite("rule", &TrialConfig::rule)
        .def_readwrite("network", &TrialConfig::network)
        .def_readwrite("threshold", &TrialConfig::threshold)
        .def_readwrite("max_rounds", &TrialConfig::max_rounds)
        .def_readwrite("seed", &TrialConfig::seed)
        .def_readwrite("initial_beliefs", &TrialConfig::initial_beliefs)
        .def_readwrite("init_scheme", &TrialConfig::init_scheme)
        .def_readwrite("lambda_overrides", &TrialConfig::lambda_overrides)
        .def_readwrite("record_trajectory", &TrialConfig::record_trajectory);

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("converged", &TrialResult::converged)
        .def_readonly("rounds", &TrialResult::rounds)
        .def_readonly("final_beliefs", &TrialResult::final_beliefs)
        .def_readonly("trajectory", &TrialResult::trajectory);

    py::class_<RoundState>(m, "RoundState")
        .def(py::init([](std::size_t t, std::vector<Belief> beliefs) {
                 return RoundState{t, std::move(beliefs)};
             }),
             py::arg("t"), py::arg("beliefs"))
        .def_readwrite("t", &RoundState::t)
        .def_readwrite("beliefs", &RoundState::beliefs);

    m.def("sample_index", &sample_index, py::arg("rng"), py::arg("pmf"));
    m.def("sample_initial_beliefs", &sample_initial_beliefs, py::arg("rng"), py::arg("n"),
          py::arg("m"), py::arg("scheme") = InitScheme::SimplexUniform);
    m.def("sample_signals", &sample_signals, py::arg("rng"), py::arg("network"));
    m.def("run_round", &run_round, py::arg("state"), py::arg("network"), py::arg("rule"),
          py::arg("signals"), py::arg("lambda_overrides") = py::none());
    m.def("has_converged", &has_converged, py::arg("state"), py::arg("true_index"),
          py::arg("threshold"));
    m.def("run_trial", &run_trial, py::arg("config"));

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("index", &TrialRecord::index)
        .def_readonly("seed", &TrialRecord::seed)
        .def_readonly("converged", &TrialRecord::converged)
        .def_readonly("rounds", &TrialRecord::rounds);

    py::class_<ExperimentSummary>(m, "ExperimentSummary")
        .def_readonly("trials", &ExperimentSummary::trials)
        .def_readonly("converged_trials", &ExperimentSummary::converged_trials)
        .def_readonly("convergence_fraction", &ExperimentSummary::convergence_fraction)
        .def_readonly("mean_rounds", &ExperimentSummary::mean_rounds)
        .def_readonly("std_rounds", &ExperimentSummary::std_rounds)
        .def_readonly("min_rounds", &ExperimentSummary::min_rounds)
        .def_readonly("max_rounds", &ExperimentSummary::max_rounds)
        .def_readonly("records", &ExperimentSummary::records);

    m.def("run_experiment", &run_experiment, py::arg("base"), py::arg("trials"),
          py::arg("seed_stream"));

    py::class_<ScenarioPreset>(m, "ScenarioPreset")
        .def(py::init([](std::string name, std::size_t n, std::size_t k) {
                 return ScenarioPreset{std::move(name), n, k};
             }),
             py::arg("name") = "clustered", py::arg("n") = 20, py::arg("k") = 5)
        .def_readwrite("name", &ScenarioPreset::name)
        .def_readwrite("n", &ScenarioPreset::n)
        .def_readwrite("k", &ScenarioPreset::k);
    m.def("build_scenario", &build_scenario, py::arg("preset"));

    m.attr("__version__") = "0.1.0";
}

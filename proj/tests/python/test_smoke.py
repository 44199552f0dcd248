"""Smoke tests for the compiled detsim module."""

import math

import pytest

import detsim


def test_bayes_update_matches_direct_arithmetic():
    model = detsim.SignalModel(["s1", "s2"], [[0.8, 0.2], [0.5, 0.5], [0.8, 0.2]])
    prior = detsim.Belief.uniform(3)
    post = detsim.bayes_update(prior, model.signal_index("s1"), model)
    expected = [8 / 21, 5 / 21, 8 / 21]
    assert post.weights == pytest.approx(expected, abs=1e-12)


def test_kl_divergence_hand_value():
    assert detsim.kl_divergence([0.2, 0.8], [0.8, 0.2]) == pytest.approx(
        0.6 * math.log(4.0), abs=1e-12
    )


def test_geometric_mix_rejects_disjoint_support():
    beliefs = [detsim.Belief([1.0, 0.0]), detsim.Belief([0.0, 1.0])]
    with pytest.raises(detsim.DegenerateSupportError):
        detsim.geometric_mix(beliefs, [0.5, 0.5])


def test_scenario_is_globally_identifiable_but_locally_ambiguous():
    net = detsim.build_scenario(detsim.ScenarioPreset("clustered", 20, 5))
    assert len(net) == 20
    assert detsim.is_globally_identifiable(net)
    for agent in range(20):
        equivalent = detsim.observationally_equivalent_set(net.model(agent), 2)
        assert len(equivalent) == 2


def test_conditions_pass_on_benchmark():
    net = detsim.build_scenario(detsim.ScenarioPreset("mixed", 20, 5))
    beliefs = [detsim.Belief([0.2, 0.3, 0.5])] * 20
    (report,) = detsim.check_conditions(net, detsim.RuleKind.BLoA, beliefs)
    assert report.condition_id == 2
    assert report.overall


def test_trial_is_deterministic_and_detects():
    net = detsim.build_scenario(detsim.ScenarioPreset("mixed", 20, 5))
    config = detsim.TrialConfig(net, detsim.RuleKind.BLoA)
    config.seed = 20240817
    first = detsim.run_trial(config)
    second = detsim.run_trial(config)
    assert first.converged
    assert first.rounds == second.rounds
    assert all(abs(b[2] - 1.0) <= 1e-3 for b in first.final_beliefs)


def test_geometric_pooling_detects_faster_than_arithmetic():
    net = detsim.build_scenario(detsim.ScenarioPreset("clustered", 20, 5))
    means = {}
    for rule in (detsim.RuleKind.BLoA, detsim.RuleKind.BLiA):
        config = detsim.TrialConfig(net, rule)
        summary = detsim.run_experiment(config, 10, 4242)
        assert summary.convergence_fraction == 1.0
        means[rule] = summary.mean_rounds
    assert means[detsim.RuleKind.BLoA] < means[detsim.RuleKind.BLiA]

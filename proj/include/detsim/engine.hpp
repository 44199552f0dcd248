#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "detsim/network.hpp"

namespace detsim {

// Deterministic generator used throughout the engine. mt19937_64 has a fully
// specified output sequence, and all variates are derived from raw bits here
// (never through std:: distributions, whose streams vary by platform).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Exponential(1) via inversion.
    double exponential() { return -std::log1p(-uniform01()); }

private:
    std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based per-trial seed derivation: trial i of a given stream always
// gets the same seed, so different rules can be compared on paired draws.
std::uint64_t trial_seed(std::uint64_t seed_stream, std::uint64_t trial_index);

// How initial beliefs are drawn when not given explicitly: uniform on the
// simplex (normalized Exponential(1) draws, i.e. Dirichlet(1,...,1)), or the
// naive uniform-then-normalize reading kept for sensitivity checks.
enum class InitScheme { SimplexUniform, NaiveNormalize };

struct TrialConfig {
    explicit TrialConfig(Network net, RuleKind rule_kind = RuleKind::BLoA)
        : rule(rule_kind), network(std::move(net)) {}

    RuleKind rule;
    Network network;
    double threshold = 1e-3;
    std::size_t max_rounds = 100000;
    std::uint64_t seed = 0;
    std::optional<std::vector<Belief>> initial_beliefs;
    InitScheme init_scheme = InitScheme::SimplexUniform;
    // Per-agent observation weights for the log-linear generalization of
    // BLoAD; absent means the BLoAD special case (lambda_i = self-weight).
    std::optional<std::vector<double>> lambda_overrides;
    bool record_trajectory = false;
};

struct TrialResult {
    bool converged = false;
    std::size_t rounds = 0;
    std::vector<Belief> final_beliefs;
    // Belief snapshots per round when recording: entry t holds the state
    // after t completed rounds (entry 0 is the initial state).
    std::vector<std::vector<Belief>> trajectory;
};

struct RoundState {
    std::size_t t = 0;
    std::vector<Belief> beliefs;
};

// Index drawn from a finite pmf by inverse CDF over the declared order.
std::size_t sample_index(Rng& rng, const std::vector<double>& pmf);

std::vector<Belief> sample_initial_beliefs(Rng& rng, std::size_t n, std::size_t m,
                                           InitScheme scheme = InitScheme::SimplexUniform);

// One signal per agent, drawn independently from the agent's true-state
// likelihood row.
std::vector<std::size_t> sample_signals(Rng& rng, const Network& net);

// One synchronous round: every agent's t+1 belief is computed from the same
// round-t state. Posterior-aggregating rules run in two phases (all Bayes
// posteriors first), so aggregation sees same-round posteriors.
RoundState run_round(const RoundState& state, const Network& net, RuleKind rule,
                     const std::vector<std::size_t>& signals,
                     const std::optional<std::vector<double>>& lambda_overrides = std::nullopt);

// True iff every agent's belief on the true state is within threshold of 1.
bool has_converged(const RoundState& state, std::size_t true_index, double threshold);

TrialResult run_trial(const TrialConfig& config);

struct TrialRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    std::size_t rounds = 0;
};

struct ExperimentSummary {
    std::size_t trials = 0;
    std::size_t converged_trials = 0;
    double convergence_fraction = 0.0;
    // Statistics over converged trials only; NaN when none converged.
    double mean_rounds = 0.0;
    double std_rounds = 0.0;
    std::size_t min_rounds = 0;
    std::size_t max_rounds = 0;
    std::vector<TrialRecord> records;
};

// Aggregates per-trial records into the summary statistics (rounds moments
// over converged trials, convergence fraction).
ExperimentSummary summarize_trials(std::vector<TrialRecord> records);

// Independent trials with per-trial seeds derived from seed_stream; fresh
// initial beliefs and signals every trial.
ExperimentSummary run_experiment(const TrialConfig& base, std::size_t trials,
                                 std::uint64_t seed_stream);

}  // namespace detsim

#include "detsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace detsim {

namespace {

// Assembles agent i's neighborhood view from the round-t state. Posteriors
// are attached only when the caller already computed them (two-phase rules).
NeighborhoodView make_view(const Network& net, std::size_t agent,
                           const std::vector<Belief>& beliefs,
                           const std::vector<Belief>* posteriors) {
    const auto& members = net.closed_neighborhood(agent);
    NeighborhoodView view;
    view.priors.reserve(members.size());
    view.weights.reserve(members.size());
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
        std::size_t j = members[pos];
        if (j == agent) {
            view.self_index = pos;
        }
        view.priors.push_back(beliefs[j]);
        view.weights.push_back(net.weight(agent, j));
    }
    if (posteriors != nullptr) {
        std::vector<Belief> posts;
        posts.reserve(members.size());
        for (std::size_t j : members) {
            posts.push_back((*posteriors)[j]);
        }
        view.posteriors = std::move(posts);
    }
    return view;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed_stream, std::uint64_t trial_index) {
    return splitmix64(seed_stream + splitmix64(trial_index + 1));
}

std::size_t sample_index(Rng& rng, const std::vector<double>& pmf) {
    if (pmf.empty()) {
        throw std::invalid_argument("sample_index: empty pmf");
    }
    double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        cum += pmf[i];
        if (u < cum) {
            return i;
        }
    }
    return pmf.size() - 1;  // numeric tail
}

std::vector<Belief> sample_initial_beliefs(Rng& rng, std::size_t n, std::size_t m,
                                           InitScheme scheme) {
    if (n == 0 || m == 0) {
        throw std::invalid_argument("sample_initial_beliefs: empty network or state set");
    }
    std::vector<Belief> out;
    out.reserve(n);
    std::vector<double> draw(m);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double& v : draw) {
            v = scheme == InitScheme::SimplexUniform ? rng.exponential() : rng.uniform01();
            sum += v;
        }
        if (!(sum > 0.0)) {
            out.push_back(Belief::uniform(m));
            continue;
        }
        std::vector<double> w(m);
        for (std::size_t s = 0; s < m; ++s) {
            w[s] = draw[s] / sum;
        }
        out.push_back(Belief(std::move(w)));
    }
    return out;
}

std::vector<std::size_t> sample_signals(Rng& rng, const Network& net) {
    const std::size_t true_state = net.states().true_index();
    std::vector<std::size_t> out(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        out[i] = sample_index(rng, net.model(i).row(true_state));
    }
    return out;
}

RoundState run_round(const RoundState& state, const Network& net, RuleKind rule,
                     const std::vector<std::size_t>& signals,
                     const std::optional<std::vector<double>>& lambda_overrides) {
    const std::size_t n = net.size();
    if (state.beliefs.size() != n) {
        throw std::invalid_argument("run_round: one belief per agent required");
    }
    if (signals.size() != n) {
        throw std::invalid_argument("run_round: one signal per agent required");
    }
    if (lambda_overrides) {
        if (rule != RuleKind::BLoAD) {
            throw std::invalid_argument("run_round: lambda overrides apply to BLoAD only");
        }
        if (lambda_overrides->size() != n) {
            throw std::invalid_argument("run_round: one lambda per agent required");
        }
    }

    // Phase one for posterior-aggregating rules: everyone's Bayes posterior
    // from its own signal, computed before any aggregation.
    std::vector<Belief> posteriors;
    const bool two_phase = rule == RuleKind::BLoA || rule == RuleKind::BLiA;
    if (two_phase) {
        posteriors.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            posteriors.push_back(bayes_update(state.beliefs[j], signals[j], net.model(j)));
        }
    }

    std::vector<Belief> next;
    next.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        NeighborhoodView view =
            make_view(net, i, state.beliefs, two_phase ? &posteriors : nullptr);
        try {
            switch (rule) {
                case RuleKind::LoAB:
                    next.push_back(step_loab(view, signals[i], net.model(i)));
                    break;
                case RuleKind::LiAB:
                    next.push_back(step_liab(view, signals[i], net.model(i)));
                    break;
                case RuleKind::BLoA:
                    next.push_back(step_bloa(view));
                    break;
                case RuleKind::BLiA:
                    next.push_back(step_blia(view));
                    break;
                case RuleKind::BLiAD:
                    next.push_back(step_bliad(view, signals[i], net.model(i)));
                    break;
                case RuleKind::BLoAD:
                    if (lambda_overrides) {
                        next.push_back(step_log_linear(view, signals[i], net.model(i),
                                                       (*lambda_overrides)[i]));
                    } else {
                        next.push_back(step_bload(view, signals[i], net.model(i)));
                    }
                    break;
            }
        } catch (const DegenerateSupportError& e) {
            throw DegenerateSupportError("agent " + std::to_string(i) + ": " + e.what());
        }
    }
    return RoundState{state.t + 1, std::move(next)};
}

bool has_converged(const RoundState& state, std::size_t true_index, double threshold) {
    for (const Belief& b : state.beliefs) {
        if (std::abs(b.at(true_index) - 1.0) > threshold) {
            return false;
        }
    }
    return true;
}

TrialResult run_trial(const TrialConfig& config) {
    if (!(config.threshold > 0.0) || config.threshold >= 1.0) {
        throw std::invalid_argument("run_trial: threshold must be in (0, 1)");
    }
    if (config.max_rounds < 1) {
        throw std::invalid_argument("run_trial: max_rounds must be at least 1");
    }
    const Network& net = config.network;
    const std::size_t n = net.size();
    const std::size_t m = net.states().size();
    if (config.lambda_overrides) {
        if (config.rule != RuleKind::BLoAD) {
            throw std::invalid_argument("run_trial: lambda overrides apply to BLoAD only");
        }
        for (double l : *config.lambda_overrides) {
            if (!(l > 0.0)) {
                throw std::invalid_argument("run_trial: lambdas must be positive");
            }
        }
    }

    Rng rng(config.seed);
    RoundState state;
    state.t = 0;
    if (config.initial_beliefs) {
        if (config.initial_beliefs->size() != n) {
            throw std::invalid_argument("run_trial: one initial belief per agent required");
        }
        for (const Belief& b : *config.initial_beliefs) {
            if (b.size() != m) {
                throw std::invalid_argument("run_trial: initial belief dimension mismatch");
            }
        }
        state.beliefs = *config.initial_beliefs;
    } else {
        state.beliefs = sample_initial_beliefs(rng, n, m, config.init_scheme);
    }

    TrialResult result;
    if (config.record_trajectory) {
        result.trajectory.push_back(state.beliefs);
    }
    const std::size_t true_index = net.states().true_index();
    if (has_converged(state, true_index, config.threshold)) {
        result.converged = true;
        result.rounds = 0;
        result.final_beliefs = std::move(state.beliefs);
        return result;
    }
    while (state.t < config.max_rounds) {
        std::vector<std::size_t> signals = sample_signals(rng, net);
        state = run_round(state, net, config.rule, signals, config.lambda_overrides);
        if (config.record_trajectory) {
            result.trajectory.push_back(state.beliefs);
        }
        if (has_converged(state, true_index, config.threshold)) {
            result.converged = true;
            break;
        }
    }
    result.rounds = state.t;
    result.final_beliefs = std::move(state.beliefs);
    return result;
}

ExperimentSummary summarize_trials(std::vector<TrialRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("summarize_trials: no records");
    }
    ExperimentSummary summary;
    summary.trials = records.size();
    summary.records = std::move(records);

    std::size_t converged = 0;
    double sum = 0.0;
    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
    for (const TrialRecord& r : summary.records) {
        if (!r.converged) {
            continue;
        }
        ++converged;
        sum += static_cast<double>(r.rounds);
        lo = std::min(lo, r.rounds);
        hi = std::max(hi, r.rounds);
    }
    summary.converged_trials = converged;
    summary.convergence_fraction =
        static_cast<double>(converged) / static_cast<double>(summary.trials);
    if (converged == 0) {
        summary.mean_rounds = std::numeric_limits<double>::quiet_NaN();
        summary.std_rounds = std::numeric_limits<double>::quiet_NaN();
        summary.min_rounds = 0;
        summary.max_rounds = 0;
        return summary;
    }
    summary.mean_rounds = sum / static_cast<double>(converged);
    double sq = 0.0;
    for (const TrialRecord& r : summary.records) {
        if (r.converged) {
            double d = static_cast<double>(r.rounds) - summary.mean_rounds;
            sq += d * d;
        }
    }
    summary.std_rounds =
        converged > 1 ? std::sqrt(sq / static_cast<double>(converged - 1)) : 0.0;
    summary.min_rounds = lo;
    summary.max_rounds = hi;
    return summary;
}

ExperimentSummary run_experiment(const TrialConfig& base, std::size_t trials,
                                 std::uint64_t seed_stream) {
    if (trials < 1) {
        throw std::invalid_argument("run_experiment: need at least one trial");
    }
    std::vector<TrialRecord> records;
    records.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        TrialConfig config = base;
        config.seed = trial_seed(seed_stream, i);
        config.record_trajectory = false;
        TrialResult result = run_trial(config);
        records.push_back({i, config.seed, result.converged, result.rounds});
    }
    return summarize_trials(std::move(records));
}

}  // namespace detsim

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace detsim {

// Tolerance accepted on externally supplied probability vectors (beliefs,
// weight rows, likelihood rows). Outputs of every operation are renormalized
// and sum to one within 1e-12.
inline constexpr double kInputSumTolerance = 1e-9;

// Thrown when an aggregation leaves every state with zero mass (disjoint
// supports under geometric mixing) or a Bayes denominator vanishes.
class DegenerateSupportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ordered set of candidate states together with the designated true state.
class StateSpace {
public:
    StateSpace(std::vector<std::string> labels, std::size_t true_index);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::size_t true_index() const { return true_index_; }

private:
    std::vector<std::string> labels_;
    std::size_t true_index_;
};

// Probability distribution over the state set. Construction validates that
// entries are nonnegative and sum to one within 1e-9, then renormalizes.
class Belief {
public:
    explicit Belief(std::vector<double> weights);

    static Belief uniform(std::size_t m);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    double at(std::size_t i) const { return weights_.at(i); }
    const std::vector<double>& weights() const { return weights_; }

    bool operator==(const Belief& other) const { return weights_ == other.weights_; }

private:
    std::vector<double> weights_;
};

// Per-agent likelihood table indexed (state, signal). Every entry must be
// strictly positive and each state's row must sum to one within 1e-9.
class SignalModel {
public:
    SignalModel(std::vector<std::string> alphabet,
                std::vector<std::vector<double>> likelihood);

    std::size_t num_states() const { return likelihood_.size(); }
    std::size_t num_signals() const { return alphabet_.size(); }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    double likelihood(std::size_t state, std::size_t signal) const {
        return likelihood_.at(state).at(signal);
    }
    const std::vector<double>& row(std::size_t state) const { return likelihood_.at(state); }

    // Index of a signal label; throws std::invalid_argument for unknown ids.
    std::size_t signal_index(const std::string& id) const;

    bool operator==(const SignalModel& other) const {
        return alphabet_ == other.alphabet_ && likelihood_ == other.likelihood_;
    }

private:
    std::vector<std::string> alphabet_;
    std::vector<std::vector<double>> likelihood_;  // [state][signal]
};

// Posterior proportional to prior(θ)·ℓ(signal|θ). States with zero prior mass
// stay at zero. Throws DegenerateSupportError if the normalizer vanishes.
Belief bayes_update(const Belief& prior, std::size_t signal, const SignalModel& model);

// Kullback-Leibler divergence Σ p·log(p/q) with the conventions
// 0·log(0/q) = 0 and p>0, q=0 → +infinity. Inputs need not be normalized;
// the Belief overload is the usual distribution-to-distribution divergence.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);
double kl_divergence(const Belief& p, const Belief& q);

// Value of the variational objective whose unique minimizer over the simplex
// is the Bayes posterior: D_KL(candidate‖prior) − Σ_θ candidate(θ)·log ℓ(signal|θ).
// Candidates with mass outside the prior's support score +infinity.
double posterior_objective(const Belief& candidate, const Belief& prior,
                           std::size_t signal, const SignalModel& model);

// Desk-scale verification oracle: enumerates every simplex grid point with
// coordinates that are multiples of grid_step (snapped to the nearest integer
// subdivision of 1; lexicographic order, first strict improvement wins ties)
// and returns the objective minimizer. Requires 0 < grid_step <= 0.1 and at
// most 4 states.
Belief solve_posterior_bruteforce(const Belief& prior, std::size_t signal,
                                  const SignalModel& model, double grid_step);

// Convex combination of beliefs. Weights must be nonnegative and sum to one
// within 1e-9; the result is a valid distribution by construction.
Belief linear_mix(const std::vector<Belief>& beliefs, const std::vector<double>& weights);

// Normalized weighted geometric mean, computed in log space with
// max-subtraction so long runs cannot underflow. A zero entry in any belief
// carrying positive weight forces that entry to zero in the result; if that
// zeroes every state, DegenerateSupportError is thrown.
Belief geometric_mix(const std::vector<Belief>& beliefs, const std::vector<double>& weights);

}  // namespace detsim

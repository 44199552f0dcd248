#pragma once

#include <optional>
#include <string>
#include <vector>

#include "detsim/belief.hpp"
#include "detsim/rules.hpp"

namespace detsim {

// Row-stochastic weight matrix; weights[i][j] is the weight agent i puts on
// agent j, positive exactly when i listens to j (or j == i).
using WeightMatrix = std::vector<std::vector<double>>;

// Directed weighted network of agents sharing one state space and one signal
// alphabet, each carrying its own likelihood table. Immutable after
// construction; construction validates row-stochasticity and shape.
class Network {
public:
    Network(StateSpace states, WeightMatrix weights, std::vector<SignalModel> models);

    std::size_t size() const { return weights_.size(); }
    const StateSpace& states() const { return states_; }
    const WeightMatrix& weights() const { return weights_; }
    double weight(std::size_t i, std::size_t j) const { return weights_.at(i).at(j); }
    const SignalModel& model(std::size_t agent) const { return models_.at(agent); }
    const std::vector<SignalModel>& models() const { return models_; }

    // Members of agent i's closed neighborhood in ascending index order:
    // i itself plus every j with weights[i][j] > 0. Used to assemble
    // NeighborhoodViews (the self is kept even at zero self-weight).
    const std::vector<std::size_t>& closed_neighborhood(std::size_t agent) const {
        return neighborhoods_.at(agent);
    }

private:
    StateSpace states_;
    WeightMatrix weights_;
    std::vector<SignalModel> models_;
    std::vector<std::vector<std::size_t>> neighborhoods_;
};

// Ring lattice of n agents where each closed neighborhood holds exactly k
// members (self plus (k-1)/2 on each side, edges bi-directed) with uniform
// weights 1/k. k must be odd and 1 <= k <= n.
WeightMatrix make_ring_lattice(std::size_t n, std::size_t k);

// True iff every ordered pair of agents is connected by a directed path.
bool is_strongly_connected(const WeightMatrix& weights);
bool is_strongly_connected(const Network& net);

// True iff the union of every window of B consecutive topologies is strongly
// connected. Every complete window of a finite sequence is checked.
bool is_b_strongly_connected(const std::vector<WeightMatrix>& sequence, std::size_t B);

// True iff some power of the nonnegative matrix is entrywise positive,
// decided via the boolean pattern of weights^((n-1)^2 + 1) (Wielandt bound).
bool is_primitive(const WeightMatrix& weights);

// States whose likelihood rows match the true state's row entrywise within
// tol, hence indistinguishable from the true state by this agent alone.
// Sorted ascending; always contains true_index.
std::vector<std::size_t> observationally_equivalent_set(const SignalModel& model,
                                                        std::size_t true_index,
                                                        double tol = 1e-12);

// True iff the intersection of all agents' observationally equivalent sets
// is exactly the true state.
bool is_globally_identifiable(const Network& net, double tol = 1e-12);

// States minimizing the KL divergence from the given true-signal distribution
// to the agent's likelihood rows, including every state within tol of the
// minimum. Covers the case where the true state is not listed.
std::vector<std::size_t> closest_states(const SignalModel& model,
                                        const std::vector<double>& true_likelihoods,
                                        double tol = 1e-12);

struct ClauseVerdict {
    std::string clause;
    bool pass = false;
    std::string diagnostic;
};

// Structured verdict for one sufficient-condition check. condition_id 1-5
// names the condition catalogued for the rule; 0 marks the informational
// report for the rule that has no catalogued condition.
struct ConditionReport {
    int condition_id = 0;
    bool informational = false;
    std::vector<ClauseVerdict> clauses;
    bool overall = false;

    static ConditionReport from_clauses(int id, bool informational,
                                        std::vector<ClauseVerdict> clauses);
};

// Evaluates the sufficient condition that governs `rule` on this setup:
// LoAB -> 1 (time-varying; static networks are the B=1 case), BLoA -> 2,
// BLiA -> 3, BLiAD -> 4, BLoAD -> 5, LiAB -> informational only.
// graph_sequence/B apply to condition 1 alone; passing them with any other
// rule is an argument error.
std::vector<ConditionReport> check_conditions(
    const Network& net, RuleKind rule, const std::vector<Belief>& initial_beliefs,
    const std::vector<WeightMatrix>* graph_sequence = nullptr,
    std::optional<std::size_t> B = std::nullopt);

}  // namespace detsim

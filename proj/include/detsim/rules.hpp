#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detsim/belief.hpp"

namespace detsim {

// The six one-round update rules, classified by aggregation type (geometric
// vs arithmetic), operation order (aggregate-then-Bayes vs Bayes-then-
// aggregate), and whether neighbors contribute delayed (pre-update) beliefs.
enum class RuleKind {
    LoAB,   // geometric aggregation of priors, then Bayes
    LiAB,   // arithmetic aggregation of priors, then Bayes
    BLoA,   // Bayes, then geometric aggregation of posteriors
    BLiA,   // Bayes, then arithmetic aggregation of posteriors
    BLiAD,  // own posterior arithmetically combined with neighbors' priors
    BLoAD,  // own posterior geometrically combined with neighbors' priors
};

constexpr std::array<RuleKind, 6> kAllRules = {
    RuleKind::LoAB, RuleKind::LiAB, RuleKind::BLoA,
    RuleKind::BLiA, RuleKind::BLiAD, RuleKind::BLoAD,
};

const char* to_string(RuleKind rule);
RuleKind rule_from_string(std::string_view name);

// One agent's view of its closed neighborhood for a single round: the round-t
// beliefs of itself and its in-neighbors, the matching weights (nonnegative,
// summing to one), and, for rules that aggregate posteriors, each member's
// already-computed Bayes posterior.
struct NeighborhoodView {
    std::size_t self_index = 0;
    std::vector<Belief> priors;
    std::vector<double> weights;
    std::optional<std::vector<Belief>> posteriors;
};

// Geometric aggregation of priors followed by the agent's own Bayes step.
Belief step_loab(const NeighborhoodView& view, std::size_t signal, const SignalModel& model);

// Arithmetic aggregation of priors followed by the agent's own Bayes step.
Belief step_liab(const NeighborhoodView& view, std::size_t signal, const SignalModel& model);

// Geometric aggregation of the members' Bayes posteriors.
Belief step_bloa(const NeighborhoodView& view);

// Exp-of-weighted-log form of the same rule, kept as an independent
// implementation for differential testing; must agree with step_bloa to
// 1e-12 on valid inputs.
Belief step_bloa_exp_log_form(const NeighborhoodView& view);

// Arithmetic aggregation of the members' Bayes posteriors.
Belief step_blia(const NeighborhoodView& view);

// Own fresh posterior weighted by the self-weight plus neighbors' round-t
// priors, combined arithmetically. Self-weight zero reduces to plain
// arithmetic consensus and the signal is ignored.
Belief step_bliad(const NeighborhoodView& view, std::size_t signal, const SignalModel& model);

// Geometric counterpart of step_bliad.
Belief step_bload(const NeighborhoodView& view, std::size_t signal, const SignalModel& model);

// Log-linear rule: normalized exp(lambda·log ℓ(signal|θ) + Σ_j w_j·log μ_j(θ)).
// Strictly generalizes step_bload, which it reproduces at lambda = self-weight.
Belief step_log_linear(const NeighborhoodView& view, std::size_t signal,
                       const SignalModel& model, double lambda);

}  // namespace detsim

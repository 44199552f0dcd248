#include "detsim/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace detsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

// Validates a nonnegative weight vector that must sum to one within 1e-9.
void check_convex_weights(const std::vector<double>& w, const char* what) {
    double sum = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument(std::string(what) + ": negative weight");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kInputSumTolerance) {
        throw std::invalid_argument(std::string(what) + ": weights sum to " +
                                    std::to_string(sum) + ", expected 1");
    }
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels, std::size_t true_index)
    : labels_(std::move(labels)), true_index_(true_index) {
    if (labels_.size() < 2) {
        throw std::invalid_argument("StateSpace: need at least two states");
    }
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
        throw std::invalid_argument("StateSpace: duplicate state labels");
    }
    if (true_index_ >= labels_.size()) {
        throw std::invalid_argument("StateSpace: true_index out of range");
    }
}

Belief::Belief(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw std::invalid_argument("Belief: empty weight vector");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("Belief: negative entry");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kInputSumTolerance) {
        throw std::invalid_argument("Belief: entries sum to " + std::to_string(sum) +
                                    ", expected 1 within 1e-9");
    }
    for (double& w : weights_) {
        w /= sum;
    }
}

Belief Belief::uniform(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("Belief::uniform: zero states");
    }
    return Belief(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

SignalModel::SignalModel(std::vector<std::string> alphabet,
                         std::vector<std::vector<double>> likelihood)
    : alphabet_(std::move(alphabet)), likelihood_(std::move(likelihood)) {
    if (alphabet_.empty()) {
        throw std::invalid_argument("SignalModel: empty alphabet");
    }
    std::unordered_set<std::string> seen(alphabet_.begin(), alphabet_.end());
    if (seen.size() != alphabet_.size()) {
        throw std::invalid_argument("SignalModel: duplicate signal ids");
    }
    if (likelihood_.empty()) {
        throw std::invalid_argument("SignalModel: empty likelihood table");
    }
    for (const auto& row : likelihood_) {
        check_same_size(row.size(), alphabet_.size(), "SignalModel row");
        double sum = 0.0;
        for (double v : row) {
            if (!(v > 0.0)) {
                throw std::invalid_argument("SignalModel: likelihood entries must be strictly positive");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kInputSumTolerance) {
            throw std::invalid_argument("SignalModel: likelihood row sums to " +
                                        std::to_string(sum) + ", expected 1");
        }
    }
}

std::size_t SignalModel::signal_index(const std::string& id) const {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), id);
    if (it == alphabet_.end()) {
        throw std::invalid_argument("SignalModel: unknown signal id '" + id + "'");
    }
    return static_cast<std::size_t>(it - alphabet_.begin());
}

Belief bayes_update(const Belief& prior, std::size_t signal, const SignalModel& model) {
    check_same_size(prior.size(), model.num_states(), "bayes_update");
    if (signal >= model.num_signals()) {
        throw std::invalid_argument("bayes_update: unknown signal index " + std::to_string(signal));
    }
    std::vector<double> post(prior.size());
    double denom = 0.0;
    for (std::size_t s = 0; s < prior.size(); ++s) {
        post[s] = prior[s] * model.likelihood(s, signal);
        denom += post[s];
    }
    if (!(denom > 0.0)) {
        throw DegenerateSupportError("bayes_update: degenerate prior, normalizer is zero");
    }
    for (double& v : post) {
        v /= denom;
    }
    return Belief(std::move(post));
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    check_same_size(p.size(), q.size(), "kl_divergence");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            continue;  // 0·log(0/q) = 0
        }
        if (q[i] == 0.0) {
            return kInf;
        }
        acc += p[i] * std::log(p[i] / q[i]);
    }
    // Mathematically nonnegative for distributions; clamp float dust.
    return acc < 0.0 ? 0.0 : acc;
}

double kl_divergence(const Belief& p, const Belief& q) {
    return kl_divergence(p.weights(), q.weights());
}

double posterior_objective(const Belief& candidate, const Belief& prior,
                           std::size_t signal, const SignalModel& model) {
    check_same_size(candidate.size(), prior.size(), "posterior_objective");
    check_same_size(candidate.size(), model.num_states(), "posterior_objective");
    if (signal >= model.num_signals()) {
        throw std::invalid_argument("posterior_objective: unknown signal index");
    }
    double acc = 0.0;
    for (std::size_t s = 0; s < candidate.size(); ++s) {
        double c = candidate[s];
        if (c == 0.0) {
            continue;
        }
        if (prior[s] == 0.0) {
            return kInf;  // candidate mass outside the prior's support
        }
        acc += c * std::log(c / prior[s]);
        acc -= c * std::log(model.likelihood(s, signal));
    }
    return acc;
}

Belief solve_posterior_bruteforce(const Belief& prior, std::size_t signal,
                                  const SignalModel& model, double grid_step) {
    check_same_size(prior.size(), model.num_states(), "solve_posterior_bruteforce");
    if (!(grid_step > 0.0) || grid_step > 0.1) {
        throw std::invalid_argument("solve_posterior_bruteforce: grid_step must be in (0, 0.1]");
    }
    const std::size_t m = prior.size();
    if (m > 4) {
        throw std::invalid_argument("solve_posterior_bruteforce: too many states for enumeration");
    }
    const long ticks = std::lround(1.0 / grid_step);

    std::vector<long> counts(m, 0);
    std::vector<double> point(m, 0.0);
    double best_obj = kInf;
    std::vector<double> best_point;

    // Lexicographic enumeration of compositions of `ticks` into m parts;
    // the first point attaining the strict minimum wins ties.
    auto visit = [&](auto&& self, std::size_t pos, long remaining) -> void {
        if (pos + 1 == m) {
            counts[pos] = remaining;
            for (std::size_t i = 0; i < m; ++i) {
                point[i] = static_cast<double>(counts[i]) / static_cast<double>(ticks);
            }
            double obj = posterior_objective(Belief(point), prior, signal, model);
            if (obj < best_obj) {
                best_obj = obj;
                best_point = point;
            }
            return;
        }
        for (long k = 0; k <= remaining; ++k) {
            counts[pos] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    visit(visit, 0, ticks);

    if (best_point.empty()) {
        throw DegenerateSupportError("solve_posterior_bruteforce: objective infinite on the whole grid");
    }
    return Belief(std::move(best_point));
}

Belief linear_mix(const std::vector<Belief>& beliefs, const std::vector<double>& weights) {
    if (beliefs.empty()) {
        throw std::invalid_argument("linear_mix: empty belief list");
    }
    check_same_size(beliefs.size(), weights.size(), "linear_mix");
    check_convex_weights(weights, "linear_mix");
    const std::size_t m = beliefs.front().size();
    std::vector<double> out(m, 0.0);
    for (std::size_t j = 0; j < beliefs.size(); ++j) {
        check_same_size(beliefs[j].size(), m, "linear_mix");
        for (std::size_t s = 0; s < m; ++s) {
            out[s] += weights[j] * beliefs[j][s];
        }
    }
    return Belief(std::move(out));
}

Belief geometric_mix(const std::vector<Belief>& beliefs, const std::vector<double>& weights) {
    if (beliefs.empty()) {
        throw std::invalid_argument("geometric_mix: empty belief list");
    }
    check_same_size(beliefs.size(), weights.size(), "geometric_mix");
    check_convex_weights(weights, "geometric_mix");
    const std::size_t m = beliefs.front().size();
    std::vector<double> lg(m, 0.0);
    for (std::size_t j = 0; j < beliefs.size(); ++j) {
        check_same_size(beliefs[j].size(), m, "geometric_mix");
        if (weights[j] == 0.0) {
            continue;  // zero-weight member contributes nothing, even at zero entries
        }
        for (std::size_t s = 0; s < m; ++s) {
            double b = beliefs[j][s];
            lg[s] = (b == 0.0) ? -kInf : lg[s] + weights[j] * std::log(b);
        }
    }
    double top = *std::max_element(lg.begin(), lg.end());
    if (top == -kInf) {
        throw DegenerateSupportError("geometric_mix: all states lost support");
    }
    std::vector<double> out(m);
    double sum = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
        out[s] = std::exp(lg[s] - top);
        sum += out[s];
    }
    for (double& v : out) {
        v /= sum;
    }
    return Belief(std::move(out));
}

}  // namespace detsim

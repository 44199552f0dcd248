#include "detsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace detsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void check_square_nonnegative(const WeightMatrix& w, const char* what) {
    if (w.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty matrix");
    }
    for (const auto& row : w) {
        if (row.size() != w.size()) {
            throw std::invalid_argument(std::string(what) + ": matrix is not square");
        }
        for (double v : row) {
            if (!(v >= 0.0)) {
                throw std::invalid_argument(std::string(what) + ": negative entry");
            }
        }
    }
}

// Edge (j -> i) whenever weights[i][j] > 0: information flows from j to i.
std::vector<std::vector<std::size_t>> adjacency_out(const WeightMatrix& w) {
    const std::size_t n = w.size();
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && w[i][j] > 0.0) {
                out[j].push_back(i);
            }
        }
    }
    return out;
}

// Iterative Tarjan; returns the number of strongly connected components.
std::size_t count_sccs(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset), lowlink(n, kUnset);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0, components = 0;

    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    std::vector<Frame> call_stack;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) {
            continue;
        }
        call_stack.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;

        while (!call_stack.empty()) {
            Frame& fr = call_stack.back();
            if (fr.edge < adj[fr.v].size()) {
                std::size_t w = adj[fr.v][fr.edge++];
                if (index[w] == kUnset) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[fr.v] = std::min(lowlink[fr.v], index[w]);
                }
            } else {
                if (lowlink[fr.v] == index[fr.v]) {
                    ++components;
                    std::size_t w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                    } while (w != fr.v);
                }
                std::size_t v = fr.v;
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    lowlink[call_stack.back().v] =
                        std::min(lowlink[call_stack.back().v], lowlink[v]);
                }
            }
        }
    }
    return components;
}

using BoolMatrix = std::vector<std::vector<char>>;

BoolMatrix bool_multiply(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t n = a.size();
    BoolMatrix out(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (b[k][j]) {
                    out[i][j] = 1;
                }
            }
        }
    }
    return out;
}

bool all_positive(const BoolMatrix& a) {
    for (const auto& row : a) {
        for (char v : row) {
            if (!v) {
                return false;
            }
        }
    }
    return true;
}

std::string state_set_to_string(const Network& net, const std::vector<std::size_t>& set) {
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        out += net.states().label(set[i]);
        if (i + 1 < set.size()) {
            out += ", ";
        }
    }
    return out + "}";
}

std::vector<std::size_t> surviving_equivalent_states(const Network& net, double tol) {
    std::vector<char> surviving(net.states().size(), 1);
    for (std::size_t i = 0; i < net.size(); ++i) {
        auto eq = observationally_equivalent_set(net.model(i), net.states().true_index(), tol);
        std::vector<char> keep(net.states().size(), 0);
        for (std::size_t s : eq) {
            keep[s] = 1;
        }
        for (std::size_t s = 0; s < surviving.size(); ++s) {
            surviving[s] = surviving[s] && keep[s];
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < surviving.size(); ++s) {
        if (surviving[s]) {
            out.push_back(s);
        }
    }
    return out;
}

void check_initial_beliefs(const Network& net, const std::vector<Belief>& beliefs) {
    if (beliefs.size() != net.size()) {
        throw std::invalid_argument("check_conditions: one initial belief per agent required");
    }
    for (const Belief& b : beliefs) {
        if (b.size() != net.states().size()) {
            throw std::invalid_argument("check_conditions: belief dimension mismatch");
        }
    }
}

ClauseVerdict strong_connectivity_clause(const WeightMatrix& weights) {
    bool ok = is_strongly_connected(weights);
    return {"strongly connected network", ok,
            ok ? "single strongly connected component"
               : "network splits into multiple strongly connected components"};
}

ClauseVerdict identifiability_clause(const Network& net) {
    auto surviving = surviving_equivalent_states(net, 1e-12);
    bool ok = surviving.size() == 1;
    return {"true state globally identifiable", ok,
            "states equivalent to the true one for every agent: " +
                state_set_to_string(net, surviving)};
}

ClauseVerdict all_positive_on_true_clause(const Network& net,
                                          const std::vector<Belief>& beliefs) {
    const std::size_t t = net.states().true_index();
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
        if (!(beliefs[i][t] > 0.0)) {
            return {"every agent starts with positive belief on the true state", false,
                    "agent " + std::to_string(i) + " has zero initial belief on " +
                        net.states().label(t)};
        }
    }
    return {"every agent starts with positive belief on the true state", true,
            "all " + std::to_string(beliefs.size()) + " agents positive"};
}

ClauseVerdict some_positive_on_true_clause(const Network& net,
                                           const std::vector<Belief>& beliefs) {
    const std::size_t t = net.states().true_index();
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
        if (beliefs[i][t] > 0.0) {
            return {"at least one agent starts with positive belief on the true state", true,
                    "agent " + std::to_string(i) + " has belief " + fmt_double(beliefs[i][t])};
        }
    }
    return {"at least one agent starts with positive belief on the true state", false,
            "every agent has zero initial belief on " + net.states().label(t)};
}

ClauseVerdict all_positive_everywhere_clause(const Network& net,
                                             const std::vector<Belief>& beliefs) {
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
        for (std::size_t s = 0; s < beliefs[i].size(); ++s) {
            if (!(beliefs[i][s] > 0.0)) {
                return {"every agent starts with positive belief on every state", false,
                        "agent " + std::to_string(i) + " has zero initial belief on " +
                            net.states().label(s)};
            }
        }
    }
    return {"every agent starts with positive belief on every state", true, "all positive"};
}

ClauseVerdict self_weights_clause(const std::vector<const WeightMatrix*>& matrices) {
    for (const WeightMatrix* w : matrices) {
        for (std::size_t i = 0; i < w->size(); ++i) {
            if (!((*w)[i][i] > 0.0)) {
                return {"strictly positive self-weights", false,
                        "agent " + std::to_string(i) + " has zero self-weight"};
            }
        }
    }
    return {"strictly positive self-weights", true, "all self-weights positive"};
}

ClauseVerdict weight_lower_bound_clause(const std::vector<const WeightMatrix*>& matrices) {
    double eta = kInf;
    for (const WeightMatrix* w : matrices) {
        for (const auto& row : *w) {
            for (double v : row) {
                if (v > 0.0) {
                    eta = std::min(eta, v);
                }
            }
        }
    }
    if (eta == kInf) {
        return {"positive weights bounded below", false, "no positive weights at all"};
    }
    return {"positive weights bounded below", true, "eta = " + fmt_double(eta)};
}

ClauseVerdict pairwise_distinguishability_clause(const Network& net) {
    const std::size_t m = net.states().size();
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            if (p == q) {
                continue;
            }
            bool found = false;
            for (std::size_t i = 0; i < net.size(); ++i) {
                if (kl_divergence(net.model(i).row(p), net.model(i).row(q)) > 0.0) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                return {"every state pair distinguishable by some agent", false,
                        "no agent separates (" + net.states().label(p) + ", " +
                            net.states().label(q) + ")"};
            }
        }
    }
    return {"every state pair distinguishable by some agent", true,
            "all ordered pairs separated"};
}

ClauseVerdict prevailing_signal_clause(const Network& net) {
    const std::size_t true_state = net.states().true_index();
    double worst_margin = kInf;
    std::string worst_diag = "no competing states for any agent";
    for (std::size_t i = 0; i < net.size(); ++i) {
        const SignalModel& model = net.model(i);
        auto equivalent = observationally_equivalent_set(model, true_state, 1e-12);
        std::vector<char> is_equivalent(net.states().size(), 0);
        for (std::size_t s : equivalent) {
            is_equivalent[s] = 1;
        }
        bool has_competitor = false;
        double best = -kInf;
        std::size_t best_signal = 0;
        for (std::size_t sig = 0; sig < model.num_signals(); ++sig) {
            double margin = kInf;
            for (std::size_t st = 0; st < net.states().size(); ++st) {
                if (is_equivalent[st]) {
                    continue;
                }
                has_competitor = true;
                margin = std::min(margin,
                                  model.likelihood(true_state, sig) - model.likelihood(st, sig));
            }
            if (margin > best) {
                best = margin;
                best_signal = sig;
            }
        }
        if (!has_competitor) {
            continue;  // clause vacuous for this agent
        }
        if (!(best > 0.0)) {
            return {"prevailing signal exists for every agent", false,
                    "agent " + std::to_string(i) + ": best margin " + fmt_double(best) +
                        " via signal " + model.alphabet()[best_signal]};
        }
        if (best < worst_margin) {
            worst_margin = best;
            worst_diag = "weakest agent " + std::to_string(i) + ": signal " +
                         model.alphabet()[best_signal] + ", margin " + fmt_double(best);
        }
    }
    return {"prevailing signal exists for every agent", true, worst_diag};
}

}  // namespace

Network::Network(StateSpace states, WeightMatrix weights, std::vector<SignalModel> models)
    : states_(std::move(states)), weights_(std::move(weights)), models_(std::move(models)) {
    check_square_nonnegative(weights_, "Network");
    const std::size_t n = weights_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double v : weights_[i]) {
            if (v > 1.0) {
                throw std::invalid_argument("Network: weight above 1");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kInputSumTolerance) {
            throw std::invalid_argument("Network: row " + std::to_string(i) + " sums to " +
                                        fmt_double(sum) + ", expected 1");
        }
    }
    if (models_.size() != n) {
        throw std::invalid_argument("Network: one signal model per agent required");
    }
    for (const SignalModel& model : models_) {
        if (model.num_states() != states_.size()) {
            throw std::invalid_argument("Network: model state count mismatch");
        }
        if (model.alphabet() != models_.front().alphabet()) {
            throw std::invalid_argument("Network: all agents must share one signal alphabet");
        }
    }
    neighborhoods_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || weights_[i][j] > 0.0) {
                neighborhoods_[i].push_back(j);
            }
        }
    }
}

WeightMatrix make_ring_lattice(std::size_t n, std::size_t k) {
    if (n == 0) {
        throw std::invalid_argument("make_ring_lattice: empty network");
    }
    if (k % 2 == 0 || k < 1 || k > n) {
        throw std::invalid_argument("make_ring_lattice: k must be odd and within [1, n]");
    }
    const std::size_t half = (k - 1) / 2;
    const double w = 1.0 / static_cast<double>(k);
    WeightMatrix out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        out[i][i] = w;
        for (std::size_t d = 1; d <= half; ++d) {
            out[i][(i + d) % n] = w;
            out[i][(i + n - d) % n] = w;
        }
    }
    return out;
}

bool is_strongly_connected(const WeightMatrix& weights) {
    check_square_nonnegative(weights, "is_strongly_connected");
    return count_sccs(adjacency_out(weights)) == 1;
}

bool is_strongly_connected(const Network& net) {
    return is_strongly_connected(net.weights());
}

bool is_b_strongly_connected(const std::vector<WeightMatrix>& sequence, std::size_t B) {
    if (sequence.empty()) {
        throw std::invalid_argument("is_b_strongly_connected: empty sequence");
    }
    if (B < 1 || B > sequence.size()) {
        throw std::invalid_argument("is_b_strongly_connected: B must be in [1, sequence length]");
    }
    const std::size_t n = sequence.front().size();
    for (const WeightMatrix& w : sequence) {
        check_square_nonnegative(w, "is_b_strongly_connected");
        if (w.size() != n) {
            throw std::invalid_argument("is_b_strongly_connected: inconsistent sizes");
        }
    }
    for (std::size_t start = 0; start + B <= sequence.size(); ++start) {
        WeightMatrix unioned(n, std::vector<double>(n, 0.0));
        for (std::size_t t = start; t < start + B; ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (sequence[t][i][j] > 0.0) {
                        unioned[i][j] = 1.0;
                    }
                }
            }
        }
        if (!is_strongly_connected(unioned)) {
            return false;
        }
    }
    return true;
}

bool is_primitive(const WeightMatrix& weights) {
    check_square_nonnegative(weights, "is_primitive");
    const std::size_t n = weights.size();
    BoolMatrix base(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            base[i][j] = weights[i][j] > 0.0;
        }
    }
    // Wielandt: primitive iff A^((n-1)^2 + 1) is entrywise positive.
    std::size_t exponent = (n - 1) * (n - 1) + 1;
    BoolMatrix result(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        result[i][i] = 1;
    }
    while (exponent > 0) {
        if (exponent & 1) {
            result = bool_multiply(result, base);
        }
        base = bool_multiply(base, base);
        exponent >>= 1;
    }
    return all_positive(result);
}

std::vector<std::size_t> observationally_equivalent_set(const SignalModel& model,
                                                        std::size_t true_index,
                                                        double tol) {
    if (true_index >= model.num_states()) {
        throw std::invalid_argument("observationally_equivalent_set: true_index out of range");
    }
    if (tol < 0.0) {
        throw std::invalid_argument("observationally_equivalent_set: negative tolerance");
    }
    std::vector<std::size_t> out;
    for (std::size_t st = 0; st < model.num_states(); ++st) {
        bool equal = true;
        for (std::size_t sig = 0; sig < model.num_signals(); ++sig) {
            if (std::abs(model.likelihood(st, sig) - model.likelihood(true_index, sig)) > tol) {
                equal = false;
                break;
            }
        }
        if (equal) {
            out.push_back(st);
        }
    }
    return out;
}

bool is_globally_identifiable(const Network& net, double tol) {
    return surviving_equivalent_states(net, tol).size() == 1;
}

std::vector<std::size_t> closest_states(const SignalModel& model,
                                        const std::vector<double>& true_likelihoods,
                                        double tol) {
    if (true_likelihoods.size() != model.num_signals()) {
        throw std::invalid_argument("closest_states: likelihood length mismatch");
    }
    if (tol < 0.0) {
        throw std::invalid_argument("closest_states: negative tolerance");
    }
    std::vector<double> divergences(model.num_states());
    double best = kInf;
    for (std::size_t st = 0; st < model.num_states(); ++st) {
        divergences[st] = kl_divergence(true_likelihoods, model.row(st));
        best = std::min(best, divergences[st]);
    }
    std::vector<std::size_t> out;
    for (std::size_t st = 0; st < model.num_states(); ++st) {
        if (divergences[st] <= best + tol) {
            out.push_back(st);
        }
    }
    return out;
}

ConditionReport ConditionReport::from_clauses(int id, bool informational,
                                              std::vector<ClauseVerdict> clauses) {
    ConditionReport report;
    report.condition_id = id;
    report.informational = informational;
    report.clauses = std::move(clauses);
    report.overall = true;
    for (const ClauseVerdict& c : report.clauses) {
        report.overall = report.overall && c.pass;
    }
    return report;
}

std::vector<ConditionReport> check_conditions(const Network& net, RuleKind rule,
                                              const std::vector<Belief>& initial_beliefs,
                                              const std::vector<WeightMatrix>* graph_sequence,
                                              std::optional<std::size_t> B) {
    check_initial_beliefs(net, initial_beliefs);
    if (rule != RuleKind::LoAB && (graph_sequence != nullptr || B.has_value())) {
        throw std::invalid_argument(
            "check_conditions: graph sequences apply only to the time-varying condition (LoAB)");
    }

    switch (rule) {
        case RuleKind::LoAB: {
            std::vector<WeightMatrix> static_sequence;
            const std::vector<WeightMatrix>* seq = graph_sequence;
            if (seq == nullptr) {
                static_sequence.push_back(net.weights());
                seq = &static_sequence;
            }
            const std::size_t window = B.value_or(1);
            std::vector<const WeightMatrix*> mats;
            for (const WeightMatrix& w : *seq) {
                mats.push_back(&w);
            }
            bool connected = is_b_strongly_connected(*seq, window);
            ClauseVerdict connectivity{
                "B-strongly connected across every window", connected,
                "B = " + std::to_string(window) + ", " + std::to_string(seq->size()) +
                    " topology(ies)" + (connected ? "" : ", some window not strongly connected")};
            return {ConditionReport::from_clauses(
                1, false,
                {std::move(connectivity), weight_lower_bound_clause(mats),
                 self_weights_clause(mats), all_positive_on_true_clause(net, initial_beliefs),
                 identifiability_clause(net)})};
        }
        case RuleKind::LiAB: {
            ClauseVerdict note{"no sufficient condition catalogued for this rule", true,
                               "rule evaluated empirically only"};
            return {ConditionReport::from_clauses(0, true, {std::move(note)})};
        }
        case RuleKind::BLoA: {
            return {ConditionReport::from_clauses(
                2, false,
                {strong_connectivity_clause(net.weights()),
                 all_positive_everywhere_clause(net, initial_beliefs),
                 pairwise_distinguishability_clause(net)})};
        }
        case RuleKind::BLiA: {
            bool primitive = is_primitive(net.weights());
            ClauseVerdict prim{"primitive weight matrix", primitive,
                               primitive ? "some power of the weight pattern is entrywise positive"
                                         : "no power of the weight pattern becomes entrywise positive"};
            return {ConditionReport::from_clauses(
                3, false,
                {std::move(prim), some_positive_on_true_clause(net, initial_beliefs),
                 prevailing_signal_clause(net)})};
        }
        case RuleKind::BLiAD: {
            std::vector<const WeightMatrix*> mats{&net.weights()};
            return {ConditionReport::from_clauses(
                4, false,
                {strong_connectivity_clause(net.weights()), self_weights_clause(mats),
                 some_positive_on_true_clause(net, initial_beliefs),
                 identifiability_clause(net)})};
        }
        case RuleKind::BLoAD: {
            return {ConditionReport::from_clauses(
                5, false,
                {strong_connectivity_clause(net.weights()),
                 all_positive_everywhere_clause(net, initial_beliefs),
                 identifiability_clause(net)})};
        }
    }
    throw std::invalid_argument("check_conditions: unknown rule");
}

}  // namespace detsim

#include "detsim/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace detsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_view(const NeighborhoodView& view, bool need_posteriors) {
    if (view.priors.empty()) {
        throw std::invalid_argument("NeighborhoodView: empty membership");
    }
    if (view.priors.size() != view.weights.size()) {
        throw std::invalid_argument("NeighborhoodView: priors/weights length mismatch");
    }
    if (view.self_index >= view.priors.size()) {
        throw std::invalid_argument("NeighborhoodView: self_index out of range");
    }
    double sum = 0.0;
    for (double w : view.weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("NeighborhoodView: negative weight");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kInputSumTolerance) {
        throw std::invalid_argument("NeighborhoodView: weights do not sum to 1");
    }
    const std::size_t m = view.priors.front().size();
    for (const Belief& b : view.priors) {
        if (b.size() != m) {
            throw std::invalid_argument("NeighborhoodView: mixed belief dimensions");
        }
    }
    if (need_posteriors) {
        if (!view.posteriors) {
            throw std::invalid_argument("NeighborhoodView: rule requires member posteriors");
        }
        if (view.posteriors->size() != view.priors.size()) {
            throw std::invalid_argument("NeighborhoodView: posteriors length mismatch");
        }
        for (const Belief& b : *view.posteriors) {
            if (b.size() != m) {
                throw std::invalid_argument("NeighborhoodView: mixed posterior dimensions");
            }
        }
    }
}

}  // namespace

const char* to_string(RuleKind rule) {
    switch (rule) {
        case RuleKind::LoAB: return "LoAB";
        case RuleKind::LiAB: return "LiAB";
        case RuleKind::BLoA: return "BLoA";
        case RuleKind::BLiA: return "BLiA";
        case RuleKind::BLiAD: return "BLiAD";
        case RuleKind::BLoAD: return "BLoAD";
    }
    throw std::invalid_argument("to_string: unknown RuleKind");
}

RuleKind rule_from_string(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "loab") return RuleKind::LoAB;
    if (lower == "liab") return RuleKind::LiAB;
    if (lower == "bloa") return RuleKind::BLoA;
    if (lower == "blia") return RuleKind::BLiA;
    if (lower == "bliad") return RuleKind::BLiAD;
    if (lower == "bload") return RuleKind::BLoAD;
    throw std::invalid_argument("unknown rule name '" + std::string(name) + "'");
}

Belief step_loab(const NeighborhoodView& view, std::size_t signal, const SignalModel& model) {
    validate_view(view, false);
    return bayes_update(geometric_mix(view.priors, view.weights), signal, model);
}

Belief step_liab(const NeighborhoodView& view, std::size_t signal, const SignalModel& model) {
    validate_view(view, false);
    return bayes_update(linear_mix(view.priors, view.weights), signal, model);
}

Belief step_bloa(const NeighborhoodView& view) {
    validate_view(view, true);
    return geometric_mix(*view.posteriors, view.weights);
}

Belief step_bloa_exp_log_form(const NeighborhoodView& view) {
    validate_view(view, true);
    const auto& posts = *view.posteriors;
    const std::size_t m = posts.front().size();
    std::vector<double> out(m);
    double denom = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < posts.size(); ++j) {
            if (view.weights[j] == 0.0) {
                continue;
            }
            double v = posts[j][s];
            if (v == 0.0) {
                acc = -kInf;
                break;
            }
            acc += view.weights[j] * std::log(v);
        }
        out[s] = std::exp(acc);
        denom += out[s];
    }
    if (!(denom > 0.0)) {
        throw DegenerateSupportError("step_bloa_exp_log_form: all states lost support");
    }
    for (double& v : out) {
        v /= denom;
    }
    return Belief(std::move(out));
}

Belief step_blia(const NeighborhoodView& view) {
    validate_view(view, true);
    return linear_mix(*view.posteriors, view.weights);
}

Belief step_bliad(const NeighborhoodView& view, std::size_t signal, const SignalModel& model) {
    validate_view(view, false);
    const std::size_t m = view.priors.front().size();
    const double self_weight = view.weights[view.self_index];
    std::vector<double> out(m, 0.0);
    if (self_weight > 0.0) {
        Belief own_posterior = bayes_update(view.priors[view.self_index], signal, model);
        for (std::size_t s = 0; s < m; ++s) {
            out[s] = self_weight * own_posterior[s];
        }
    }
    for (std::size_t j = 0; j < view.priors.size(); ++j) {
        if (j == view.self_index) {
            continue;
        }
        for (std::size_t s = 0; s < m; ++s) {
            out[s] += view.weights[j] * view.priors[j][s];
        }
    }
    return Belief(std::move(out));
}

Belief step_bload(const NeighborhoodView& view, std::size_t signal, const SignalModel& model) {
    validate_view(view, false);
    const std::size_t m = view.priors.front().size();
    const double self_weight = view.weights[view.self_index];
    std::vector<double> lg(m, 0.0);
    if (self_weight > 0.0) {
        Belief own_posterior = bayes_update(view.priors[view.self_index], signal, model);
        for (std::size_t s = 0; s < m; ++s) {
            double v = own_posterior[s];
            lg[s] = (v == 0.0) ? -kInf : self_weight * std::log(v);
        }
    }
    for (std::size_t j = 0; j < view.priors.size(); ++j) {
        if (j == view.self_index || view.weights[j] == 0.0) {
            continue;
        }
        for (std::size_t s = 0; s < m; ++s) {
            double v = view.priors[j][s];
            lg[s] = (v == 0.0) ? -kInf : lg[s] + view.weights[j] * std::log(v);
        }
    }
    double top = *std::max_element(lg.begin(), lg.end());
    if (top == -kInf) {
        throw DegenerateSupportError("step_bload: all states lost support");
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

Belief step_log_linear(const NeighborhoodView& view, std::size_t signal,
                       const SignalModel& model, double lambda) {
    validate_view(view, false);
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("step_log_linear: lambda must be positive");
    }
    const std::size_t m = view.priors.front().size();
    if (m != model.num_states()) {
        throw std::invalid_argument("step_log_linear: dimension mismatch");
    }
    if (signal >= model.num_signals()) {
        throw std::invalid_argument("step_log_linear: unknown signal index");
    }
    std::vector<double> lg(m);
    for (std::size_t s = 0; s < m; ++s) {
        lg[s] = lambda * std::log(model.likelihood(s, signal));
        for (std::size_t j = 0; j < view.priors.size(); ++j) {
            if (view.weights[j] == 0.0) {
                continue;
            }
            double v = view.priors[j][s];
            if (v == 0.0) {
                lg[s] = -kInf;
                break;
            }
            lg[s] += view.weights[j] * std::log(v);
        }
    }
    double top = *std::max_element(lg.begin(), lg.end());
    if (top == -kInf) {
        throw DegenerateSupportError("step_log_linear: all states lost support");
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

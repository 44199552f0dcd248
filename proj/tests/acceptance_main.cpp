// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier statistical checks than the unit suites; everything is
// seeded and deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "detsim/harness.hpp"

using namespace detsim;

namespace {

constexpr std::uint64_t kMasterSeed = 42;
constexpr std::size_t kTrials = 100;

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

// One-sided sign test: P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(std::size_t wins, std::size_t n) {
    double p = 0.0;
    for (std::size_t k = wins; k <= n; ++k) {
        double log_term = std::lgamma(static_cast<double>(n) + 1.0) -
                          std::lgamma(static_cast<double>(k) + 1.0) -
                          std::lgamma(static_cast<double>(n - k) + 1.0) -
                          static_cast<double>(n) * std::log(2.0);
        p += std::exp(log_term);
    }
    return std::min(p, 1.0);
}

struct PairedCells {
    // rounds[preset][rule] -> per-trial rounds, aligned by trial index
    std::map<std::string, std::map<RuleKind, std::vector<std::size_t>>> rounds;
    bool all_converged = true;
    double elapsed_seconds = 0.0;

    double mean(const std::string& preset, RuleKind rule) const {
        const auto& r = rounds.at(preset).at(rule);
        double sum = 0.0;
        for (std::size_t v : r) {
            sum += static_cast<double>(v);
        }
        return sum / static_cast<double>(r.size());
    }
};

PairedCells run_benchmark_cells() {
    PairedCells cells;
    auto start = std::chrono::steady_clock::now();
    for (const char* preset : {"clustered", "mixed"}) {
        Network net = build_scenario({preset, 20, 5});
        for (RuleKind rule : kAllRules) {
            TrialConfig base(net, rule);
            base.threshold = 1e-3;
            base.max_rounds = 100000;
            ExperimentSummary summary = run_experiment(base, kTrials, kMasterSeed);
            std::vector<std::size_t> rounds;
            rounds.reserve(summary.records.size());
            for (const TrialRecord& r : summary.records) {
                cells.all_converged = cells.all_converged && r.converged;
                rounds.push_back(r.rounds);
            }
            cells.rounds[preset][rule] = std::move(rounds);
        }
    }
    cells.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cells;
}

Criterion effectiveness(const PairedCells& cells) {
    Criterion c{"effectiveness", false, ""};
    c.pass = cells.all_converged && cells.elapsed_seconds < 60.0;
    c.detail = std::string(cells.all_converged ? "1200/1200 trials converged"
                                               : "some trials did not converge") +
               ", benchmark block took " + fmt(cells.elapsed_seconds) + "s";
    return c;
}

// wins counts trials where fast is strictly quicker; ties are dropped.
std::pair<double, std::string> paired_sign(const std::vector<std::size_t>& fast,
                                           const std::vector<std::size_t>& slow) {
    std::size_t wins = 0, losses = 0;
    for (std::size_t i = 0; i < fast.size(); ++i) {
        if (fast[i] < slow[i]) {
            ++wins;
        } else if (fast[i] > slow[i]) {
            ++losses;
        }
    }
    double p = sign_test_p(wins, wins + losses);
    std::ostringstream detail;
    detail << wins << "W/" << losses << "L p=" << fmt(p, "%.3g");
    return {p, detail.str()};
}

Criterion geometric_beats_arithmetic(const PairedCells& cells) {
    Criterion c{"geometric-beats-arithmetic", true, ""};
    std::ostringstream detail;
    const std::vector<std::pair<RuleKind, RuleKind>> pairs = {
        {RuleKind::BLoA, RuleKind::BLiA},
        {RuleKind::LoAB, RuleKind::LiAB},
        {RuleKind::BLoAD, RuleKind::BLiAD},
    };
    for (const char* preset : {"clustered", "mixed"}) {
        for (auto [geo, arith] : pairs) {
            double geo_mean = cells.mean(preset, geo);
            double arith_mean = cells.mean(preset, arith);
            auto [p, stats] =
                paired_sign(cells.rounds.at(preset).at(geo), cells.rounds.at(preset).at(arith));
            bool ok = geo_mean < arith_mean && p < 0.01;
            c.pass = c.pass && ok;
            detail << preset[0] << ":" << to_string(geo) << "<" << to_string(arith) << " "
                   << fmt(geo_mean, "%.1f") << " vs " << fmt(arith_mean, "%.1f") << " ("
                   << stats << ") ";
        }
    }
    c.detail = detail.str();
    return c;
}

Criterion delay_penalty(const PairedCells& cells) {
    Criterion c{"delay-penalty", true, ""};
    std::ostringstream detail;
    const std::vector<std::pair<RuleKind, RuleKind>> pairs = {
        {RuleKind::BLiA, RuleKind::BLiAD},
        {RuleKind::BLoA, RuleKind::BLoAD},
    };
    for (const char* preset : {"clustered", "mixed"}) {
        for (auto [plain, delayed] : pairs) {
            double plain_mean = cells.mean(preset, plain);
            double delayed_mean = cells.mean(preset, delayed);
            auto [p, stats] = paired_sign(cells.rounds.at(preset).at(plain),
                                          cells.rounds.at(preset).at(delayed));
            bool ok = delayed_mean > plain_mean && p < 0.01;
            c.pass = c.pass && ok;
            detail << preset[0] << ":" << to_string(delayed) << ">" << to_string(plain) << " "
                   << fmt(delayed_mean, "%.1f") << " vs " << fmt(plain_mean, "%.1f") << " ("
                   << stats << ") ";
        }
    }
    c.detail = detail.str();
    return c;
}

Criterion order_insensitivity(const PairedCells& cells) {
    Criterion c{"order-insensitivity", true, ""};
    std::ostringstream detail;
    for (const char* preset : {"clustered", "mixed"}) {
        double loab = cells.mean(preset, RuleKind::LoAB);
        double bloa = cells.mean(preset, RuleKind::BLoA);
        double liab = cells.mean(preset, RuleKind::LiAB);
        double blia = cells.mean(preset, RuleKind::BLiA);
        // pooling-method gap between the arithmetic and geometric families
        double gap = (liab + blia) / 2.0 - (loab + bloa) / 2.0;
        double geo_order_gap = std::abs(loab - bloa);
        double arith_order_gap = std::abs(liab - blia);
        bool ok = gap > 0.0 && geo_order_gap < 0.25 * gap && arith_order_gap < 0.25 * gap;
        c.pass = c.pass && ok;
        detail << preset << ": order gaps " << fmt(geo_order_gap, "%.1f") << "/"
               << fmt(arith_order_gap, "%.1f") << " vs pooling gap " << fmt(gap, "%.1f")
               << " ";
    }
    c.detail = detail.str();
    return c;
}

Criterion mixing_helps(const PairedCells& cells) {
    Criterion c{"mixing-helps", true, ""};
    std::ostringstream detail;
    for (RuleKind rule : kAllRules) {
        double clustered = cells.mean("clustered", rule);
        double mixed = cells.mean("mixed", rule);
        bool ok = mixed < clustered;
        c.pass = c.pass && ok;
        detail << to_string(rule) << " " << fmt(mixed, "%.1f") << "<" << fmt(clustered, "%.1f")
               << (ok ? " " : "! ");
    }
    c.detail = detail.str();
    return c;
}

Criterion variational_oracle() {
    Criterion c{"variational-oracle", true, ""};
    Rng rng(46341);
    double worst_gap = 0.0, worst_l1 = 0.0;
    for (int i = 0; i < 50; ++i) {
        Belief prior = sample_initial_beliefs(rng, 1, 3).front();
        std::vector<std::vector<double>> rows(3);
        for (auto& row : rows) {
            double a = 0.1 + 0.8 * rng.uniform01();
            row = {a, 1.0 - a};
        }
        SignalModel model({"s1", "s2"}, rows);
        std::size_t signal = rng.uniform01() < 0.5 ? 0 : 1;

        Belief exact = bayes_update(prior, signal, model);
        Belief grid = solve_posterior_bruteforce(prior, signal, model, 0.01);
        double gap = posterior_objective(grid, prior, signal, model) -
                     posterior_objective(exact, prior, signal, model);
        double l1 = 0.0;
        for (std::size_t s = 0; s < 3; ++s) {
            l1 += std::abs(grid[s] - exact[s]);
        }
        worst_gap = std::max(worst_gap, gap);
        worst_l1 = std::max(worst_l1, l1);
        c.pass = c.pass && gap >= -1e-12 && gap <= 1e-2 && l1 <= 0.02;
    }
    c.detail = "50 instances, worst objective gap " + fmt(worst_gap, "%.2e") +
               ", worst L1 " + fmt(worst_l1, "%.4f");
    return c;
}

NeighborhoodView random_view(Rng& rng, const SignalModel& model, std::size_t signal) {
    std::size_t count = 1 + static_cast<std::size_t>(rng.uniform01() * 5.0);
    NeighborhoodView view;
    view.self_index = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(count));
    std::vector<double> raw(count);
    double sum = 0.0;
    for (double& w : raw) {
        w = rng.exponential() + 1e-6;
        sum += w;
    }
    view.weights.resize(count);
    std::vector<Belief> posts;
    for (std::size_t j = 0; j < count; ++j) {
        view.weights[j] = raw[j] / sum;
        Belief prior = sample_initial_beliefs(rng, 1, 3).front();
        posts.push_back(bayes_update(prior, signal, model));
        view.priors.push_back(std::move(prior));
    }
    view.posteriors = std::move(posts);
    return view;
}

double max_abs_diff(const Belief& a, const Belief& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out = std::max(out, std::abs(a[i] - b[i]));
    }
    return out;
}

Criterion equivalence_identities() {
    Criterion c{"equivalence-identities", true, ""};
    SignalModel model({"s1", "s2"}, {{0.8, 0.2}, {0.5, 0.5}, {0.8, 0.2}});
    Rng rng(8888);
    double worst_bloa = 0.0, worst_bload = 0.0;
    for (int i = 0; i < 1000; ++i) {
        NeighborhoodView view = random_view(rng, model, i % 2);
        worst_bloa =
            std::max(worst_bloa, max_abs_diff(step_bloa(view), step_bloa_exp_log_form(view)));
    }
    for (int i = 0; i < 1000; ++i) {
        NeighborhoodView view = random_view(rng, model, i % 2);
        std::size_t sig = i % 2;
        worst_bload = std::max(
            worst_bload, max_abs_diff(step_bload(view, sig, model),
                                      step_log_linear(view, sig, model,
                                                      view.weights[view.self_index])));
    }
    c.pass = worst_bloa <= 1e-12 && worst_bload <= 1e-12;
    c.detail = "1000 views each; exp-log form diff " + fmt(worst_bloa, "%.2e") +
               ", log-linear diff " + fmt(worst_bload, "%.2e");
    return c;
}

Criterion condition_checkers() {
    Criterion c{"condition-checkers", true, ""};
    std::ostringstream detail;
    auto expect = [&](bool ok, const std::string& what) {
        c.pass = c.pass && ok;
        if (!ok) {
            detail << "FAILED " << what << "; ";
        }
    };

    SignalModel v1({"s1", "s2"}, {{0.8, 0.2}, {0.5, 0.5}, {0.8, 0.2}});
    SignalModel v2({"s1", "s2"}, {{0.2, 0.8}, {0.8, 0.2}, {0.8, 0.2}});
    StateSpace states({"theta1", "theta2", "theta3"}, 2);

    Network benchmark = build_scenario({"clustered", 20, 5});
    std::vector<Belief> positive(20, Belief({0.2, 0.3, 0.5}));
    for (RuleKind rule :
         {RuleKind::LoAB, RuleKind::BLoA, RuleKind::BLiA, RuleKind::BLiAD, RuleKind::BLoAD}) {
        auto reports = check_conditions(benchmark, rule, positive);
        expect(reports.size() == 1 && reports[0].overall,
               std::string("benchmark condition for ") + to_string(rule));
    }

    // disconnected graph: exactly the connectivity clause of condition 2
    {
        WeightMatrix w(6, std::vector<double>(6, 0.0));
        for (std::size_t i = 0; i < 6; ++i) {
            std::size_t base = i < 3 ? 0 : 3;
            for (std::size_t j = base; j < base + 3; ++j) {
                w[i][j] = 1.0 / 3.0;
            }
        }
        std::vector<SignalModel> models;
        for (std::size_t i = 0; i < 6; ++i) {
            models.push_back(i % 2 == 0 ? v1 : v2);
        }
        auto report =
            check_conditions(Network(states, w, models), RuleKind::BLoA,
                             std::vector<Belief>(6, Belief({0.2, 0.3, 0.5})))[0];
        expect(!report.overall && !report.clauses[0].pass && report.clauses[1].pass &&
                   report.clauses[2].pass,
               "disconnected graph flips only connectivity");
    }

    // zero self-weight: exactly clause 2 of condition 4
    {
        WeightMatrix w(4, std::vector<double>(4, 0.0));
        for (std::size_t i = 0; i < 4; ++i) {
            w[i][(i + 1) % 4] = 0.5;
            w[i][(i + 3) % 4] = 0.5;
        }
        std::vector<SignalModel> models = {v1, v2, v1, v2};
        auto report =
            check_conditions(Network(states, w, models), RuleKind::BLiAD,
                             std::vector<Belief>(4, Belief({0.2, 0.3, 0.5})))[0];
        expect(!report.overall && report.clauses[0].pass && !report.clauses[1].pass &&
                   report.clauses[2].pass && report.clauses[3].pass,
               "zero self-weight flips only the self-weight clause");
    }

    // one population everywhere: exactly the identifiability clause of condition 5
    {
        Network net(states, make_ring_lattice(6, 3), std::vector<SignalModel>(6, v1));
        auto report = check_conditions(net, RuleKind::BLoAD,
                                       std::vector<Belief>(6, Belief({0.2, 0.3, 0.5})))[0];
        expect(!report.overall && report.clauses[0].pass && report.clauses[1].pass &&
                   !report.clauses[2].pass,
               "single population flips only identifiability");
    }

    // pure cycle: exactly the primitivity clause of condition 3
    {
        WeightMatrix w(4, std::vector<double>(4, 0.0));
        for (std::size_t i = 0; i < 4; ++i) {
            w[i][(i + 1) % 4] = 1.0;
        }
        std::vector<SignalModel> models = {v1, v2, v1, v2};
        auto report =
            check_conditions(Network(states, w, models), RuleKind::BLiA,
                             std::vector<Belief>(4, Belief({0.2, 0.3, 0.5})))[0];
        expect(!report.overall && !report.clauses[0].pass && report.clauses[1].pass &&
                   report.clauses[2].pass,
               "pure cycle flips only primitivity");
    }

    if (c.pass) {
        detail << "benchmark conditions 1-5 pass; four counterexamples flip their clause";
    }
    c.detail = detail.str();
    return c;
}

Criterion degenerate_reductions() {
    Criterion c{"degenerate-reductions", true, ""};
    std::ostringstream detail;

    // consensus-only: remove every self-weight from the benchmark lattice
    WeightMatrix w = make_ring_lattice(20, 5);
    for (std::size_t i = 0; i < 20; ++i) {
        w[i][i] = 0.0;
        for (std::size_t j = 0; j < 20; ++j) {
            w[i][j] *= 5.0 / 4.0;
        }
    }
    Network consensus_net(build_scenario({"clustered", 20, 5}).states(), w,
                          build_scenario({"clustered", 20, 5}).models());
    for (RuleKind rule : {RuleKind::BLiAD, RuleKind::BLoAD}) {
        TrialConfig config(consensus_net, rule);
        config.seed = 31337;
        config.max_rounds = 1000;
        config.record_trajectory = true;
        TrialResult result = run_trial(config);
        double peak = 0.0;
        for (const auto& round : result.trajectory) {
            for (const Belief& b : round) {
                peak = std::max(peak, b[2]);
            }
        }
        bool ok = !result.converged && peak < 0.99;
        c.pass = c.pass && ok;
        detail << to_string(rule) << " consensus-only peak " << fmt(peak, "%.3f") << " ";
    }

    // single agent: all six rules produce one trajectory
    Network lone(StateSpace({"theta1", "theta2", "theta3"}, 2), {{1.0}},
                 {SignalModel({"s1", "s2"}, {{0.8, 0.2}, {0.5, 0.5}, {0.2, 0.8}})});
    std::vector<TrialResult> results;
    for (RuleKind rule : kAllRules) {
        TrialConfig config(lone, rule);
        config.seed = 1234;
        config.max_rounds = 5000;
        config.record_trajectory = true;
        results.push_back(run_trial(config));
    }
    double worst = 0.0;
    bool aligned = true;
    for (std::size_t r = 1; r < results.size(); ++r) {
        aligned = aligned && results[r].rounds == results[0].rounds &&
                  results[r].trajectory.size() == results[0].trajectory.size();
        if (!aligned) {
            break;
        }
        for (std::size_t t = 0; t < results[0].trajectory.size(); ++t) {
            worst = std::max(
                worst, max_abs_diff(results[r].trajectory[t][0], results[0].trajectory[t][0]));
        }
    }
    bool ok = aligned && worst <= 1e-9 && results[0].converged;
    c.pass = c.pass && ok;
    detail << "single-agent max trajectory diff " << fmt(worst, "%.2e");
    c.detail = detail.str();
    return c;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Criterion determinism() {
    Criterion c{"determinism", false, ""};
    const std::filesystem::path base =
        std::filesystem::temp_directory_path() /
        ("detsim-accept-" + std::to_string(::getpid()));
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);

    const char* cli = std::getenv("DETSIM_CLI_BIN");
    bool used_cli = cli != nullptr && *cli != '\0';
    if (used_cli) {
        for (const char* tag : {"a", "b"}) {
            std::string cmd = std::string("\"") + cli + "\" --trials 3 --seed 777 --output \"" +
                              (base / tag).string() + "\" >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                c.detail = "CLI invocation failed";
                std::filesystem::remove_all(base);
                return c;
            }
        }
    } else {
        ExperimentSpec spec = default_experiment_spec();
        spec.trials = 3;
        spec.master_seed = 777;
        std::ostringstream out, err;
        for (const char* tag : {"a", "b"}) {
            spec.output_dir = (base / tag).string();
            if (run_experiment_spec(spec, out, err) != 0) {
                c.detail = "library run failed: " + err.str();
                std::filesystem::remove_all(base);
                return c;
            }
        }
    }
    std::string csv_a = slurp(base / "a" / "results.csv");
    std::string csv_b = slurp(base / "b" / "results.csv");
    std::string json_a = slurp(base / "a" / "summary.json");
    std::string json_b = slurp(base / "b" / "summary.json");
    c.pass = !csv_a.empty() && csv_a == csv_b && json_a == json_b;
    c.detail = std::string(used_cli ? "CLI" : "library") + " rerun, " +
               std::to_string(csv_a.size()) + " CSV bytes compared";
    std::filesystem::remove_all(base);
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;
    PairedCells cells = run_benchmark_cells();
    criteria.push_back(effectiveness(cells));
    criteria.push_back(geometric_beats_arithmetic(cells));
    criteria.push_back(delay_penalty(cells));
    criteria.push_back(order_insensitivity(cells));
    criteria.push_back(mixing_helps(cells));
    criteria.push_back(variational_oracle());
    criteria.push_back(equivalence_identities());
    criteria.push_back(condition_checkers());
    criteria.push_back(degenerate_reductions());
    criteria.push_back(determinism());

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        failures += c.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << " ("
              << criteria.size() - static_cast<std::size_t>(failures) << "/"
              << criteria.size() << ")\n";
    return failures == 0 ? 0 : 1;
}

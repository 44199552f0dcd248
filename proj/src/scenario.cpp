#include "detsim/scenario.hpp"

namespace detsim {

namespace {

// Population-one agents cannot separate theta1 from theta3; population-two
// agents cannot separate theta2 from theta3.
SignalModel population_one_model() {
    return SignalModel({"s1", "s2"},
                       {{0.8, 0.2},    // theta1
                        {0.5, 0.5},    // theta2
                        {0.8, 0.2}});  // theta3 (true state)
}

SignalModel population_two_model() {
    return SignalModel({"s1", "s2"},
                       {{0.2, 0.8},
                        {0.8, 0.2},
                        {0.8, 0.2}});
}

}  // namespace

Network build_scenario(const ScenarioPreset& preset) {
    if (preset.name != "clustered" && preset.name != "mixed") {
        throw std::invalid_argument("build_scenario: unknown preset '" + preset.name + "'");
    }
    if (preset.n < 2 || preset.n % 2 != 0) {
        throw std::invalid_argument("build_scenario: n must be even (half per population)");
    }
    StateSpace states({"theta1", "theta2", "theta3"}, 2);
    WeightMatrix weights = make_ring_lattice(preset.n, preset.k);
    std::vector<SignalModel> models;
    models.reserve(preset.n);
    for (std::size_t i = 0; i < preset.n; ++i) {
        bool first_population =
            preset.name == "clustered" ? i < preset.n / 2 : i % 2 == 0;
        models.push_back(first_population ? population_one_model() : population_two_model());
    }
    return Network(std::move(states), std::move(weights), std::move(models));
}

}  // namespace detsim

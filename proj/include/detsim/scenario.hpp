#pragma once

#include <string>

#include "detsim/network.hpp"

namespace detsim {

// Built-in benchmark placements on a ring lattice with two complementary
// agent populations over three states and two signals. Neither population
// can identify the true state alone; together they can.
//   clustered: first half of the ring is population one, second half is two.
//   mixed:     populations alternate around the ring.
struct ScenarioPreset {
    std::string name = "clustered";
    std::size_t n = 20;
    std::size_t k = 5;
};

Network build_scenario(const ScenarioPreset& preset);

}  // namespace detsim

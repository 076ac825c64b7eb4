#pragma once

#include "quartersim/realize.hpp"
#include "support.hpp"

namespace testsupport {

inline quartersim::ScenarioDescription scenario(std::uint64_t seed = 20200420) {
  auto sd = quartersim::preset("distributed-energy");
  sd.name = "test-quarter";
  sd.seed = seed;
  return sd;
}

inline quartersim::QuarterModel quarter(const std::string& grid, const quartersim::ScenarioDescription& sd) {
  return quartersim::realize_quarter(sd, quartersim::import_simbench(grid_dir(grid)));
}

}  // namespace testsupport

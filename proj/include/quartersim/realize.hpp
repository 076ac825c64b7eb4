#pragma once

#include <filesystem>
#include <optional>

#include "quartersim/buildings.hpp"
#include "quartersim/dhn.hpp"
#include "quartersim/grid.hpp"
#include "quartersim/quarter.hpp"
#include "quartersim/scenario.hpp"

namespace quartersim {

/// Archetype catalog shipped with the repository (data/archetypes.csv).
std::filesystem::path default_archetype_path();

struct RealizeOptions {
  std::optional<ArchetypeCatalog> catalog;  // default: shipped catalog
  DnCatalog dn_catalog = DnCatalog::standard();
  std::optional<ProfilePool> pool;  // default: synthetic pool seeded from the scenario
};

/// Service cable between a household and its grid node.
inline constexpr double kServiceLineROhmPerKm = 0.642;
inline constexpr double kServiceLineXOhmPerKm = 0.083;
inline constexpr double kServiceLineLengthKm = 0.02;
inline constexpr double kServiceLineIMaxA = 142.0;

/// Number of items drawn for a share; halves round away from zero.
std::size_t share_count(double share, std::size_t n);

/// Largest-remainder apportionment of `n` slots over integer weights (map order breaks ties).
std::map<std::string, std::size_t> apportion(const std::map<std::string, int>& weights, std::size_t n);

/// Builds a fully parameterized quarter: one household per load anchor, seeded component
/// assignment, envelopes, prosumer sizing, profile binding and the DHN forest.
QuarterModel realize_quarter(const ScenarioDescription& sd, const GridTopology& grid, const RealizeOptions& options = {});

}  // namespace quartersim

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "quartersim/grid.hpp"
#include "quartersim/scenario.hpp"

namespace quartersim {

inline constexpr double kWaterDensity = 977.0;        // kg/m^3 at ~70 degC
inline constexpr double kWaterHeatCapacity = 4186.0;  // J/(kg K)

struct DhnVertex {
  std::string node_ref;
  Coord coord;
  double nhl_w = 0.0;  // 0 for junctions and plants without local consumers
  bool is_source = false;
  bool operator==(const DhnVertex&) const = default;
};

/// Undirected edge between vertex indices; weight is the Euclidean distance for mst mode.
struct DhnEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
  bool operator==(const DhnEdge&) const = default;
};

struct DnSize {
  std::string label;
  double inner_diameter_m = 0.0;
  bool operator==(const DnSize&) const = default;
};

class DnCatalog {
 public:
  /// DN15 ... DN200 steel-pipe series.
  static DnCatalog standard();
  /// Columns dn_label;inner_diameter_mm. Sorted ascending by diameter after load.
  static DnCatalog load(const std::filesystem::path& path);
  explicit DnCatalog(std::vector<DnSize> sizes);

  const std::vector<DnSize>& sizes() const { return sizes_; }
  /// Smallest size whose velocity at `mass_flow` stays within v_max; SizingError if none.
  const DnSize& select(double mass_flow_kg_s, double rho, double v_max, std::string_view what) const;

 private:
  std::vector<DnSize> sizes_;
};

/// Pipe oriented from `upstream` (towards the source) to `downstream` (vertex indices).
struct DhnPipe {
  std::string id;
  std::size_t upstream = 0;
  std::size_t downstream = 0;
  double length_m = 0.0;
  double nominal_mass_flow_kg_s = 0.0;
  double inner_diameter_m = 0.0;
  std::string dn_label;
  bool operator==(const DhnPipe&) const = default;
};

struct DhnNetwork {
  std::vector<DhnVertex> vertices;
  std::vector<DhnPipe> pipes;
  double t_supply_c = 70.0;
  double t_return_c = 40.0;
  double v_max_m_s = 1.5;
  double rho_water = kWaterDensity;
  double cp_water = kWaterHeatCapacity;
  bool operator==(const DhnNetwork&) const = default;
};

/// mst: minimum spanning forest on the complete Euclidean graph, ties broken by (weight, lower id, higher id).
/// mirror-electric: the electric edges among the given vertices; must form a forest (TopologyError otherwise).
std::vector<DhnEdge> build_topology(std::span<const DhnVertex> vertices, DhnTopologyMode mode,
                                    std::span<const DhnEdge> electric_edges = {});

/// Design mass flow for a heat load at the given supply/return spread.
double vertex_mass_flow(double nhl_w, double t_supply_c, double t_return_c, double cp_water = kWaterHeatCapacity);

/// sqrt(4 m / (rho pi v)), meters.
double raw_inner_diameter(double mass_flow_kg_s, double rho, double v_max);
double flow_velocity(double mass_flow_kg_s, double rho, double inner_diameter_m);

struct DhnDesign {
  double t_supply_c = 70.0;
  double t_return_c = 40.0;
  double v_max_m_s = 1.5;
  double rho_water = kWaterDensity;
  double cp_water = kWaterHeatCapacity;
  double routing_factor = 1.3;
  double min_length_m = 1.0;
};

/// Roots each tree at its source vertex, aggregates downstream design flows per edge and
/// rounds each pipe up to the next catalog size.
DhnNetwork size_pipes(std::span<const DhnEdge> tree, std::vector<DhnVertex> vertices, const DhnDesign& design,
                      const DnCatalog& catalog = DnCatalog::standard());

struct DhnFlowState {
  std::vector<double> pipe_mass_flow_kg_s;
  std::vector<double> vertex_return_temperature_c;
  std::vector<std::string> warnings;
};

/// Ideal-hydraulic steady state for instantaneous per-vertex demands (W).
DhnFlowState solve_dhn(const DhnNetwork& net, std::span<const double> demand_w);

}  // namespace quartersim

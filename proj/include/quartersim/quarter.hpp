#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quartersim/buildings.hpp"
#include "quartersim/dhn.hpp"
#include "quartersim/grid.hpp"
#include "quartersim/profiles.hpp"
#include "quartersim/prosumer.hpp"
#include "quartersim/scenario.hpp"

namespace quartersim {

struct GridLayerRecord {
  std::string id;
  Layer kind = Layer::LV;
  bool operator==(const GridLayerRecord&) const = default;
};

struct CellRecord {
  std::string id;
  std::string layer_ref;
  bool operator==(const CellRecord&) const = default;
};

struct NodeRecord {
  std::string id;
  std::string cell_ref;
  Coord coord;
  double vn_kv = 0.0;
  BusKind kind = BusKind::pq;
  bool operator==(const NodeRecord&) const = default;
};

enum class EndpointKind { node, household };
std::string_view to_string(EndpointKind kind);
EndpointKind parse_endpoint_kind(std::string_view text);

/// Grid cable (node-node) or household service line (household-node).
struct LineRecord {
  std::string id;
  EndpointKind endpoint_a_kind = EndpointKind::node;
  std::string endpoint_a;
  std::string endpoint_b;  // always a node
  double r_ohm_per_km = 0.0;
  double x_ohm_per_km = 0.0;
  double length_km = 0.0;
  double i_max_a = 0.0;
  bool operator==(const LineRecord&) const = default;
};

/// Trunk pipe (upstream node a -> downstream node b) or household service pipe (household a - node b).
struct PipeRecord {
  std::string id;
  EndpointKind endpoint_a_kind = EndpointKind::node;
  std::string endpoint_a;
  std::string endpoint_b;
  double length_m = 0.0;
  double nominal_mass_flow_kg_s = 0.0;
  double inner_diameter_m = 0.0;
  std::string dn_label;
  bool operator==(const PipeRecord&) const = default;
};

struct DhnVertexRecord {
  std::string node_ref;
  double nhl_w = 0.0;
  bool is_source = false;
  bool operator==(const DhnVertexRecord&) const = default;
};

struct HouseholdRecord {
  std::string id;
  std::string node_ref;
  ProsumerConfig config;
  ThermalEnvelope envelope;
  bool operator==(const HouseholdRecord&) const = default;
};

struct ProfileRecord {
  std::string id;
  ProfileKind kind = ProfileKind::load;
  /// Bundle-relative path of the series file.
  std::string data_ref;
  bool operator==(const ProfileRecord&) const = default;
};

struct QuarterSettings {
  double base_mva = 1.0;
  double rho_water = kWaterDensity;
  double cp_water = kWaterHeatCapacity;
  bool operator==(const QuarterSettings&) const = default;
};

/// Relational aggregate describing one living quarter. Tables are kept sorted by id.
struct QuarterModel {
  ScenarioDescription scenario;
  QuarterSettings settings;
  std::vector<GridLayerRecord> grid_layers;
  std::vector<CellRecord> cells;
  std::vector<NodeRecord> nodes;
  std::vector<LineRecord> lines;
  std::vector<Transformer> transformers;
  std::vector<HouseholdRecord> households;
  std::vector<PipeRecord> pipes;
  std::vector<DhnVertexRecord> dhn_vertices;
  std::vector<ProfileRecord> profiles;
  /// Series payload for `profiles`; entries may be missing after loading an incomplete bundle.
  ProfilePool profile_data;

  bool operator==(const QuarterModel&) const = default;

  const NodeRecord* find_node(std::string_view id) const;
  const HouseholdRecord* find_household(std::string_view id) const;
};

/// Sorts every table by id so that equal quarters have equal exports.
void canonicalize(QuarterModel& q);

struct Violation {
  std::string table;
  std::string row_id;
  std::string rule;
  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

/// Empty iff every relational invariant holds.
std::vector<Violation> validate(const QuarterModel& q);

/// DHN forest rebuilt from vertex and trunk pipe tables.
DhnNetwork dhn_network(const QuarterModel& q);

}  // namespace quartersim

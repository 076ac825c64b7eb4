#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace quartersim {

enum class DhnTopologyMode { mirror_electric, mst };

std::string_view to_string(DhnTopologyMode mode);
DhnTopologyMode parse_topology_mode(std::string_view text);

struct DhnOptions {
  DhnTopologyMode topology_mode = DhnTopologyMode::mst;
  double t_supply_c = 70.0;
  double t_return_c = 40.0;
  double v_max_m_s = 1.5;
  /// Pipe length = Euclidean vertex distance x routing_factor.
  double routing_factor = 1.3;
  /// Household-to-node service pipe length.
  double service_pipe_length_m = 15.0;

  bool operator==(const DhnOptions&) const = default;
};

/// Scenario knobs that drive every synthesis step. Immutable once validated.
struct ScenarioDescription {
  std::string name;
  std::string preset = "distributed-energy";

  double pv_share = 0.0;
  double bes_share = 0.0;
  double bev_share = 0.0;
  double ehp_share = 0.0;
  double dhn_share = 0.0;
  /// Fraction of BES/BEV owners whose device accepts external setpoints.
  double controllable_bes_share = 0.0;
  double controllable_bev_share = 0.0;

  /// Relative weights; normalized to the number of household anchors.
  std::map<std::string, int> households_per_archetype;
  /// 0 reproduces archetype nominal values, 1 samples across the full catalog bounds.
  double envelope_variance = 1.0;

  double t_indoor_set_c = 20.0;
  double t_ref_ambient_c = -12.0;
  DhnOptions dhn;

  bool sm_enabled = true;
  double sm_sigma_p_w = 0.0;
  double sm_sigma_q_var = 0.0;

  int profile_year = 2020;
  int profile_pool_size = 8;

  std::uint64_t seed = 0;

  bool operator==(const ScenarioDescription&) const = default;
};

std::vector<std::string> preset_names();
/// Fully populated description for a named preset; name and seed are left empty/zero.
ScenarioDescription preset(std::string_view name);

/// Every violated invariant, one message per rule; empty when valid.
std::vector<std::string> validate_scenario(const ScenarioDescription& sd);

/// Parses the JSON configuration; omitted fields take preset defaults.
/// Throws ParseError (with JSON pointer path) or ValidationError.
ScenarioDescription load_scenario(std::string_view config_text);
ScenarioDescription load_scenario_file(const std::filesystem::path& path);

/// Canonical serialization: every field, keys sorted, two-space indent, trailing newline.
std::string serialize_scenario(const ScenarioDescription& sd);

}  // namespace quartersim

#include "quartersim/scenario.hpp"

#include <cmath>
#include <json.hpp>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

using nlohmann::json;

std::string_view to_string(DhnTopologyMode mode) {
  return mode == DhnTopologyMode::mst ? "mst" : "mirror-electric";
}

DhnTopologyMode parse_topology_mode(std::string_view text) {
  if (text == "mst") return DhnTopologyMode::mst;
  if (text == "mirror-electric") return DhnTopologyMode::mirror_electric;
  throw ParseError("/dhn_options/topology_mode",
                   "expected 'mst' or 'mirror-electric', got '" + std::string(text) + "'");
}

std::vector<std::string> preset_names() { return {"distributed-energy"}; }

ScenarioDescription preset(std::string_view name) {
  if (name != "distributed-energy") {
    throw ParseError("/preset", "unknown preset '" + std::string(name) + "' (available: distributed-energy)");
  }
  // Repository defaults for a decentralized, highly electrified quarter.
  ScenarioDescription sd;
  sd.preset = "distributed-energy";
  sd.pv_share = 0.6;
  sd.bes_share = 0.4;
  sd.bev_share = 0.6;
  sd.ehp_share = 0.3;
  sd.dhn_share = 0.3;
  sd.controllable_bes_share = 0.5;
  sd.controllable_bev_share = 0.5;
  sd.households_per_archetype = {{"SFH_1970", 40}, {"SFH_renovated", 35}, {"MFH_1990", 25}};
  sd.envelope_variance = 1.0;
  sd.t_indoor_set_c = 20.0;
  sd.t_ref_ambient_c = -12.0;
  sd.dhn = DhnOptions{};
  sd.sm_enabled = true;
  sd.sm_sigma_p_w = 10.0;
  sd.sm_sigma_q_var = 10.0;
  sd.profile_year = 2020;
  sd.profile_pool_size = 8;
  return sd;
}

std::vector<std::string> validate_scenario(const ScenarioDescription& sd) {
  std::vector<std::string> failures;
  auto check_share = [&](const char* field, double v) {
    if (!(v >= 0.0 && v <= 1.0)) failures.push_back(std::string(field) + ": share out of [0,1]");
  };
  if (sd.name.empty()) failures.emplace_back("name: must not be empty");
  check_share("pv_share", sd.pv_share);
  check_share("bes_share", sd.bes_share);
  check_share("bev_share", sd.bev_share);
  check_share("ehp_share", sd.ehp_share);
  check_share("dhn_share", sd.dhn_share);
  check_share("controllable_bes_share", sd.controllable_bes_share);
  check_share("controllable_bev_share", sd.controllable_bev_share);
  if (sd.ehp_share + sd.dhn_share > 1.0 + 1e-12) {
    failures.emplace_back("ehp_share + dhn_share: exceeds 1 (heat supply modes are exclusive)");
  }
  if (!(sd.dhn.t_supply_c > sd.dhn.t_return_c)) failures.emplace_back("dhn_options.t_supply: must exceed t_return");
  if (!(sd.dhn.t_return_c > sd.t_indoor_set_c)) failures.emplace_back("dhn_options.t_return: must exceed t_indoor_set");
  if (!(sd.t_indoor_set_c > sd.t_ref_ambient_c)) failures.emplace_back("t_indoor_set: must exceed t_ref_ambient");
  if (!(sd.dhn.v_max_m_s > 0.0)) failures.emplace_back("dhn_options.v_max: must be positive");
  if (!(sd.dhn.routing_factor >= 1.0)) failures.emplace_back("dhn_options.routing_factor: must be at least 1");
  if (!(sd.dhn.service_pipe_length_m > 0.0)) failures.emplace_back("dhn_options.service_pipe_length: must be positive");
  if (!(sd.sm_sigma_p_w >= 0.0)) failures.emplace_back("sm_sigma_p: must be non-negative");
  if (!(sd.sm_sigma_q_var >= 0.0)) failures.emplace_back("sm_sigma_q: must be non-negative");
  if (!(sd.envelope_variance >= 0.0 && sd.envelope_variance <= 1.0)) {
    failures.emplace_back("envelope_variance: out of [0,1]");
  }
  long total = 0;
  for (const auto& [id, count] : sd.households_per_archetype) {
    if (count < 0) failures.push_back("households_per_archetype." + id + ": negative count");
    total += count;
  }
  if (total <= 0) failures.emplace_back("households_per_archetype: needs a positive total count");
  if (sd.profile_pool_size < 1) failures.emplace_back("profile_pool_size: must be at least 1");
  if (sd.profile_year < 1900 || sd.profile_year > 2200) failures.emplace_back("profile_year: out of range");
  return failures;
}

namespace {

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected number");
  return j.get<double>();
}

double get_share(const json& j, const std::string& path) { return get_number(j, path); }

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected string");
  return j.get<std::string>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path, "expected boolean");
  return j.get<bool>();
}

void apply_dhn(const json& j, DhnOptions& dhn) {
  if (!j.is_object()) throw ParseError("/dhn_options", "expected object");
  for (const auto& [key, value] : j.items()) {
    const std::string path = "/dhn_options/" + key;
    if (key == "topology_mode") dhn.topology_mode = parse_topology_mode(get_string(value, path));
    else if (key == "t_supply") dhn.t_supply_c = get_number(value, path);
    else if (key == "t_return") dhn.t_return_c = get_number(value, path);
    else if (key == "v_max") dhn.v_max_m_s = get_number(value, path);
    else if (key == "routing_factor") dhn.routing_factor = get_number(value, path);
    else if (key == "service_pipe_length") dhn.service_pipe_length_m = get_number(value, path);
    else throw ParseError(path, "unknown field");
  }
}

}  // namespace

ScenarioDescription load_scenario(std::string_view config_text) {
  json root;
  try {
    root = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ParseError("/", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("/", "expected object");
  if (!root.contains("name")) throw ParseError("/name", "required field missing");
  if (!root.contains("seed")) throw ParseError("/seed", "required field missing");

  std::string preset_name = "distributed-energy";
  if (root.contains("preset")) preset_name = get_string(root["preset"], "/preset");
  ScenarioDescription sd = preset(preset_name);

  for (const auto& [key, value] : root.items()) {
    const std::string path = "/" + key;
    if (key == "name") sd.name = get_string(value, path);
    else if (key == "preset") continue;
    else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ParseError(path, "expected unsigned 64-bit integer");
      sd.seed = value.get<std::uint64_t>();
    }
    else if (key == "pv_share") sd.pv_share = get_share(value, path);
    else if (key == "bes_share") sd.bes_share = get_share(value, path);
    else if (key == "bev_share") sd.bev_share = get_share(value, path);
    else if (key == "ehp_share") sd.ehp_share = get_share(value, path);
    else if (key == "dhn_share") sd.dhn_share = get_share(value, path);
    else if (key == "controllable_bes_share") sd.controllable_bes_share = get_share(value, path);
    else if (key == "controllable_bev_share") sd.controllable_bev_share = get_share(value, path);
    else if (key == "households_per_archetype") {
      if (!value.is_object()) throw ParseError(path, "expected object");
      sd.households_per_archetype.clear();
      for (const auto& [arch, count] : value.items()) {
        sd.households_per_archetype[arch] = get_int(count, path + "/" + arch);
      }
    }
    else if (key == "envelope_variance") sd.envelope_variance = get_number(value, path);
    else if (key == "t_indoor_set") sd.t_indoor_set_c = get_number(value, path);
    else if (key == "t_ref_ambient") sd.t_ref_ambient_c = get_number(value, path);
    else if (key == "dhn_options") apply_dhn(value, sd.dhn);
    else if (key == "sm_enabled") sd.sm_enabled = get_bool(value, path);
    else if (key == "sm_sigma_p") sd.sm_sigma_p_w = get_number(value, path);
    else if (key == "sm_sigma_q") sd.sm_sigma_q_var = get_number(value, path);
    else if (key == "profile_year") sd.profile_year = get_int(value, path);
    else if (key == "profile_pool_size") sd.profile_pool_size = get_int(value, path);
    else throw ParseError(path, "unknown field");
  }

  if (auto failures = validate_scenario(sd); !failures.empty()) throw ValidationError(std::move(failures));
  return sd;
}

ScenarioDescription load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(csv::read_text(path));
}

std::string serialize_scenario(const ScenarioDescription& sd) {
  json j;  // nlohmann::json objects keep keys sorted
  j["name"] = sd.name;
  j["preset"] = sd.preset;
  j["seed"] = sd.seed;
  j["pv_share"] = sd.pv_share;
  j["bes_share"] = sd.bes_share;
  j["bev_share"] = sd.bev_share;
  j["ehp_share"] = sd.ehp_share;
  j["dhn_share"] = sd.dhn_share;
  j["controllable_bes_share"] = sd.controllable_bes_share;
  j["controllable_bev_share"] = sd.controllable_bev_share;
  j["households_per_archetype"] = sd.households_per_archetype;
  j["envelope_variance"] = sd.envelope_variance;
  j["t_indoor_set"] = sd.t_indoor_set_c;
  j["t_ref_ambient"] = sd.t_ref_ambient_c;
  j["dhn_options"] = {
      {"topology_mode", std::string(to_string(sd.dhn.topology_mode))},
      {"t_supply", sd.dhn.t_supply_c},
      {"t_return", sd.dhn.t_return_c},
      {"v_max", sd.dhn.v_max_m_s},
      {"routing_factor", sd.dhn.routing_factor},
      {"service_pipe_length", sd.dhn.service_pipe_length_m},
  };
  j["sm_enabled"] = sd.sm_enabled;
  j["sm_sigma_p"] = sd.sm_sigma_p_w;
  j["sm_sigma_q"] = sd.sm_sigma_q_var;
  j["profile_year"] = sd.profile_year;
  j["profile_pool_size"] = sd.profile_pool_size;
  return j.dump(2) + "\n";
}

}  // namespace quartersim

#include "quartersim/quarterdb.hpp"

#include <openssl/evp.h>

#include <array>
#include <json.hpp>
#include <memory>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

namespace fs = std::filesystem;
using csv::format_double;
using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

namespace {

constexpr const char* kRequiredTables[] = {
    "grid_layers", "cells",        "nodes", "lines", "transformers", "households", "envelopes", "envelope_surfaces",
    "pv",          "bes",          "bevs",  "ehp",   "smart_meters", "pipes",      "dhn_vertices", "profiles",
    "settings"};

std::string flag(bool b) { return b ? "1" : "0"; }

bool parse_flag(const std::string& s, const std::string& ctx) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw ParseError(ctx, "expected 0 or 1, got '" + s + "'");
}

std::string pad_position(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03zu", i);
  return buf;
}

std::map<std::string, csv::Table> build_tables(const QuarterModel& q) {
  std::map<std::string, csv::Table> t;
  t["grid_layers"] = {{"id", "kind"}, {}};
  for (const auto& r : q.grid_layers) t["grid_layers"].rows.push_back({r.id, std::string(to_string(r.kind))});
  t["cells"] = {{"id", "layer_ref"}, {}};
  for (const auto& r : q.cells) t["cells"].rows.push_back({r.id, r.layer_ref});
  t["nodes"] = {{"id", "cell_ref", "x", "y", "vn_kv", "kind"}, {}};
  for (const auto& r : q.nodes) {
    t["nodes"].rows.push_back({r.id, r.cell_ref, format_double(r.coord.x), format_double(r.coord.y),
                               format_double(r.vn_kv), std::string(to_string(r.kind))});
  }
  t["lines"] = {{"id", "endpoint_a_kind", "endpoint_a", "endpoint_b", "r_ohm_per_km", "x_ohm_per_km", "length_km", "i_max_a"}, {}};
  for (const auto& r : q.lines) {
    t["lines"].rows.push_back({r.id, std::string(to_string(r.endpoint_a_kind)), r.endpoint_a, r.endpoint_b,
                               format_double(r.r_ohm_per_km), format_double(r.x_ohm_per_km),
                               format_double(r.length_km), format_double(r.i_max_a)});
  }
  t["transformers"] = {{"id", "hv_node", "lv_node", "s_rated_mva", "vk_percent", "vkr_percent"}, {}};
  for (const auto& r : q.transformers) {
    t["transformers"].rows.push_back({r.id, r.hv_bus, r.lv_bus, format_double(r.s_rated_mva),
                                      format_double(r.vk_percent), format_double(r.vkr_percent)});
  }
  t["households"] = {{"id", "node_ref", "archetype_id", "heat_mode", "load_profile_ref", "load_scale"}, {}};
  t["envelopes"] = {{"household_id", "ground_area_m2", "floors", "volume_m3", "air_exchange_per_h", "t_indoor_set_c",
                     "annual_electric_demand_kwh", "thermal_capacitance_j_per_k"}, {}};
  t["envelope_surfaces"] = {{"id", "household_id", "surface", "u_value", "area_m2"}, {}};
  t["pv"] = {{"household_id", "p_peak_kw", "gamma_per_k"}, {}};
  t["bes"] = {{"household_id", "capacity_kwh", "p_max_kw", "soc_min", "soc_max", "eta", "externally_controllable"}, {}};
  t["bevs"] = {{"id", "household_id", "capacity_kwh", "p_charge_kw", "driving_profile_ref", "externally_controllable"}, {}};
  t["ehp"] = {{"household_id", "p_th_nominal_kw", "eta_carnot"}, {}};
  t["smart_meters"] = {{"household_id", "sigma_p_w", "sigma_q_var", "enabled"}, {}};
  for (const auto& h : q.households) {
    const auto& c = h.config;
    const auto& e = h.envelope;
    t["households"].rows.push_back({h.id, h.node_ref, e.archetype_id, std::string(to_string(c.heat_mode)),
                                    c.load_profile_ref, format_double(c.load_scale)});
    t["envelopes"].rows.push_back({h.id, format_double(e.ground_area_m2), std::to_string(e.floors),
                                   format_double(e.volume_m3), format_double(e.air_exchange_per_h),
                                   format_double(e.t_indoor_set_c), format_double(e.annual_electric_demand_kwh),
                                   format_double(e.thermal_capacitance_j_per_k)});
    for (std::size_t i = 0; i < e.surfaces.size(); ++i) {
      const auto& s = e.surfaces[i];
      t["envelope_surfaces"].rows.push_back({h.id + "/" + pad_position(i), h.id, s.name, format_double(s.u_value),
                                             format_double(s.area_m2)});
    }
    if (c.pv) t["pv"].rows.push_back({h.id, format_double(c.pv->p_peak_kw), format_double(c.pv->gamma_per_k)});
    if (c.bes) {
      const auto& b = *c.bes;
      t["bes"].rows.push_back({h.id, format_double(b.capacity_kwh), format_double(b.p_max_kw), format_double(b.soc_min),
                               format_double(b.soc_max), format_double(b.eta), flag(b.externally_controllable)});
    }
    for (std::size_t i = 0; i < c.bevs.size(); ++i) {
      const auto& b = c.bevs[i];
      t["bevs"].rows.push_back({h.id + "/" + pad_position(i), h.id, format_double(b.capacity_kwh),
                                format_double(b.p_charge_kw), b.driving_profile_ref, flag(b.externally_controllable)});
    }
    if (c.ehp) t["ehp"].rows.push_back({h.id, format_double(c.ehp->p_th_nominal_kw), format_double(c.ehp->eta_carnot)});
    t["smart_meters"].rows.push_back({h.id, format_double(c.sm.sigma_p_w), format_double(c.sm.sigma_q_var), flag(c.sm.enabled)});
  }
  t["pipes"] = {{"id", "endpoint_a_kind", "endpoint_a", "endpoint_b", "length_m", "nominal_mass_flow_kg_s",
                 "inner_diameter_m", "dn_label"}, {}};
  for (const auto& p : q.pipes) {
    t["pipes"].rows.push_back({p.id, std::string(to_string(p.endpoint_a_kind)), p.endpoint_a, p.endpoint_b,
                               format_double(p.length_m), format_double(p.nominal_mass_flow_kg_s),
                               format_double(p.inner_diameter_m), p.dn_label});
  }
  t["dhn_vertices"] = {{"node_ref", "nhl_w", "is_source"}, {}};
  for (const auto& v : q.dhn_vertices) t["dhn_vertices"].rows.push_back({v.node_ref, format_double(v.nhl_w), flag(v.is_source)});
  t["profiles"] = {{"id", "kind", "data_ref"}, {}};
  for (const auto& p : q.profiles) t["profiles"].rows.push_back({p.id, std::string(to_string(p.kind)), p.data_ref});
  t["settings"] = {{"key", "value"}, {}};
  t["settings"].rows.push_back({"base_mva", format_double(q.settings.base_mva)});
  t["settings"].rows.push_back({"cp_water", format_double(q.settings.cp_water)});
  t["settings"].rows.push_back({"rho_water", format_double(q.settings.rho_water)});

  // stable row order by first column
  for (auto& [name, table] : t) {
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
  }
  return t;
}

void write_and_digest(const fs::path& root, const std::string& rel, const std::string& content, Manifest& m) {
  csv::write_text(root / rel, content);
  m.digests[rel] = sha256_hex(content);
}

std::string manifest_text(const Manifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["name"] = m.name;
  j["seed"] = m.seed;
  j["digests"] = m.digests;
  return j.dump(2) + "\n";
}

class Reader {
 public:
  Reader(const fs::path& dir, const Manifest& m) : dir_(dir), manifest_(m) {}

  std::string verified_text(const std::string& rel) const {
    auto it = manifest_.digests.find(rel);
    if (it == manifest_.digests.end()) throw CorruptionError("manifest lists no digest for " + rel);
    const auto text = csv::read_text(dir_ / rel);
    if (sha256_hex(text) != it->second) throw CorruptionError("digest mismatch: " + rel);
    return text;
  }

  csv::Table table(const std::string& name) const {
    const std::string rel = "tables/" + name + ".csv";
    if (!fs::exists(dir_ / rel)) throw IoError("table absent: " + name);
    return csv::parse(verified_text(rel));
  }

 private:
  fs::path dir_;
  const Manifest& manifest_;
};

struct Columns {
  const csv::Table& t;
  std::string name;
  const std::string& get(const std::vector<std::string>& row, const char* col) const { return row[t.column(col, name)]; }
  double num(const std::vector<std::string>& row, const char* col) const {
    return csv::parse_double(get(row, col), name + "." + col);
  }
};

}  // namespace

Manifest CsvBundleStore::save(const QuarterModel& input, const fs::path& dir) {
  if (auto violations = validate(input); !violations.empty()) {
    std::vector<std::string> msgs;
    for (const auto& v : violations) msgs.push_back(to_string(v));
    throw ValidationError(std::move(msgs));
  }
  QuarterModel q = input;
  canonicalize(q);

  std::error_code ec;
  fs::create_directories(dir / "tables", ec);
  if (!ec) fs::create_directories(dir / "profiles", ec);
  if (ec) throw IoError("cannot create bundle directory " + dir.string() + ": " + ec.message());
  fs::remove(dir / "manifest.json", ec);

  Manifest m;
  m.name = q.scenario.name;
  m.seed = q.scenario.seed;
  for (const auto& [name, table] : build_tables(q)) {
    write_and_digest(dir, "tables/" + name + ".csv", csv::to_string(table), m);
  }
  write_and_digest(dir, "scenario.json", serialize_scenario(q.scenario), m);
  for (const auto& p : q.profiles) {
    if (p.kind == ProfileKind::load) {
      if (const auto* data = q.profile_data.find_load(p.id)) {
        write_load_profile(dir / p.data_ref, *data);
        m.digests[p.data_ref] = sha256_hex(csv::read_text(dir / p.data_ref));
      }
    } else if (const auto* data = q.profile_data.find_driving(p.id)) {
      write_driving_profile(dir / p.data_ref, *data);
      m.digests[p.data_ref] = sha256_hex(csv::read_text(dir / p.data_ref));
    }
  }
  csv::write_text(dir / "manifest.json", manifest_text(m));
  return m;
}

Manifest read_manifest(const fs::path& dir) {
  const auto path = dir / "manifest.json";
  if (!fs::exists(path)) throw IoError("manifest absent in " + dir.string());
  json j;
  try {
    j = json::parse(csv::read_text(path));
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("unreadable manifest: ") + e.what());
  }
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw CorruptionError("manifest lacks schema_version");
  }
  Manifest m;
  m.schema_version = j["schema_version"].get<int>();
  if (m.schema_version != kBundleSchemaVersion) {
    throw VersionError("unsupported bundle schema version " + std::to_string(m.schema_version) + " (supported: " +
                       std::to_string(kBundleSchemaVersion) + ")");
  }
  try {
    m.name = j.at("name").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.digests = j.at("digests").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

QuarterModel CsvBundleStore::load(const fs::path& dir) {
  const Manifest m = read_manifest(dir);
  const Reader reader(dir, m);
  for (const char* name : kRequiredTables) {
    if (!fs::exists(dir / "tables" / (std::string(name) + ".csv"))) throw IoError("table absent: " + std::string(name));
  }
  QuarterModel q;
  q.scenario = load_scenario(reader.verified_text("scenario.json"));

  {
    const auto t = reader.table("settings");
    for (const auto& row : t.rows) {
      const double v = csv::parse_double(row[1], "settings." + row[0]);
      if (row[0] == "base_mva") q.settings.base_mva = v;
      else if (row[0] == "rho_water") q.settings.rho_water = v;
      else if (row[0] == "cp_water") q.settings.cp_water = v;
    }
  }
  {
    const auto t = reader.table("grid_layers");
    Columns c{t, "grid_layers"};
    for (const auto& row : t.rows) q.grid_layers.push_back({c.get(row, "id"), parse_layer(c.get(row, "kind"))});
  }
  {
    const auto t = reader.table("cells");
    Columns c{t, "cells"};
    for (const auto& row : t.rows) q.cells.push_back({c.get(row, "id"), c.get(row, "layer_ref")});
  }
  {
    const auto t = reader.table("nodes");
    Columns c{t, "nodes"};
    for (const auto& row : t.rows) {
      q.nodes.push_back({c.get(row, "id"), c.get(row, "cell_ref"), Coord{c.num(row, "x"), c.num(row, "y")},
                         c.num(row, "vn_kv"), parse_bus_kind(c.get(row, "kind"))});
    }
  }
  {
    const auto t = reader.table("lines");
    Columns c{t, "lines"};
    for (const auto& row : t.rows) {
      q.lines.push_back({c.get(row, "id"), parse_endpoint_kind(c.get(row, "endpoint_a_kind")), c.get(row, "endpoint_a"),
                         c.get(row, "endpoint_b"), c.num(row, "r_ohm_per_km"), c.num(row, "x_ohm_per_km"),
                         c.num(row, "length_km"), c.num(row, "i_max_a")});
    }
  }
  {
    const auto t = reader.table("transformers");
    Columns c{t, "transformers"};
    for (const auto& row : t.rows) {
      q.transformers.push_back({c.get(row, "id"), c.get(row, "hv_node"), c.get(row, "lv_node"),
                                c.num(row, "s_rated_mva"), c.num(row, "vk_percent"), c.num(row, "vkr_percent")});
    }
  }

  {
    const auto t = reader.table("households");
    Columns c{t, "households"};
    for (const auto& row : t.rows) {
      HouseholdRecord h;
      h.id = c.get(row, "id");
      h.node_ref = c.get(row, "node_ref");
      h.envelope.archetype_id = c.get(row, "archetype_id");
      h.config.household_id = h.id;
      h.config.heat_mode = parse_heat_mode(c.get(row, "heat_mode"));
      h.config.load_profile_ref = c.get(row, "load_profile_ref");
      h.config.load_scale = c.num(row, "load_scale");
      q.households.push_back(std::move(h));
    }
  }
  auto household = [&q](const std::string& id, const char* table) -> HouseholdRecord& {
    for (auto& h : q.households) {
      if (h.id == id) return h;
    }
    throw IntegrityError(std::string(table) + " references unknown household " + id);
  };
  {
    const auto t = reader.table("envelopes");
    Columns c{t, "envelopes"};
    for (const auto& row : t.rows) {
      auto& e = household(c.get(row, "household_id"), "envelopes").envelope;
      e.ground_area_m2 = c.num(row, "ground_area_m2");
      e.floors = static_cast<int>(csv::parse_int(c.get(row, "floors"), "envelopes.floors"));
      e.volume_m3 = c.num(row, "volume_m3");
      e.air_exchange_per_h = c.num(row, "air_exchange_per_h");
      e.t_indoor_set_c = c.num(row, "t_indoor_set_c");
      e.annual_electric_demand_kwh = c.num(row, "annual_electric_demand_kwh");
      e.thermal_capacitance_j_per_k = c.num(row, "thermal_capacitance_j_per_k");
    }
  }
  {
    const auto t = reader.table("envelope_surfaces");
    Columns c{t, "envelope_surfaces"};
    for (const auto& row : t.rows) {
      household(c.get(row, "household_id"), "envelope_surfaces")
          .envelope.surfaces.push_back({c.get(row, "surface"), c.num(row, "u_value"), c.num(row, "area_m2")});
    }
  }
  {
    const auto t = reader.table("pv");
    Columns c{t, "pv"};
    for (const auto& row : t.rows) {
      household(c.get(row, "household_id"), "pv").config.pv = PvConfig{c.num(row, "p_peak_kw"), c.num(row, "gamma_per_k")};
    }
  }
  {
    const auto t = reader.table("bes");
    Columns c{t, "bes"};
    for (const auto& row : t.rows) {
      household(c.get(row, "household_id"), "bes").config.bes =
          BesConfig{c.num(row, "capacity_kwh"), c.num(row, "p_max_kw"), c.num(row, "soc_min"), c.num(row, "soc_max"),
                    c.num(row, "eta"), parse_flag(c.get(row, "externally_controllable"), "bes")};
    }
  }
  {
    const auto t = reader.table("bevs");
    Columns c{t, "bevs"};
    for (const auto& row : t.rows) {
      household(c.get(row, "household_id"), "bevs")
          .config.bevs.push_back(BevConfig{c.num(row, "capacity_kwh"), c.num(row, "p_charge_kw"),
                                           c.get(row, "driving_profile_ref"),
                                           parse_flag(c.get(row, "externally_controllable"), "bevs")});
    }
  }
  {
    const auto t = reader.table("ehp");
    Columns c{t, "ehp"};
    for (const auto& row : t.rows) {
      household(c.get(row, "household_id"), "ehp").config.ehp = EhpConfig{c.num(row, "p_th_nominal_kw"), c.num(row, "eta_carnot")};
    }
  }
  {
    const auto t = reader.table("smart_meters");
    Columns c{t, "smart_meters"};
    for (const auto& row : t.rows) {
      household(c.get(row, "household_id"), "smart_meters").config.sm =
          SmartMeterConfig{c.num(row, "sigma_p_w"), c.num(row, "sigma_q_var"), parse_flag(c.get(row, "enabled"), "smart_meters")};
    }
  }
  {
    const auto t = reader.table("pipes");
    Columns c{t, "pipes"};
    for (const auto& row : t.rows) {
      q.pipes.push_back({c.get(row, "id"), parse_endpoint_kind(c.get(row, "endpoint_a_kind")), c.get(row, "endpoint_a"),
                         c.get(row, "endpoint_b"), c.num(row, "length_m"), c.num(row, "nominal_mass_flow_kg_s"),
                         c.num(row, "inner_diameter_m"), c.get(row, "dn_label")});
    }
  }
  {
    const auto t = reader.table("dhn_vertices");
    Columns c{t, "dhn_vertices"};
    for (const auto& row : t.rows) {
      q.dhn_vertices.push_back({c.get(row, "node_ref"), c.num(row, "nhl_w"), parse_flag(c.get(row, "is_source"), "dhn_vertices")});
    }
  }
  {
    const auto t = reader.table("profiles");
    Columns c{t, "profiles"};
    for (const auto& row : t.rows) {
      ProfileRecord p{c.get(row, "id"), parse_profile_kind(c.get(row, "kind")), c.get(row, "data_ref")};
      if (fs::exists(dir / p.data_ref)) {
        reader.verified_text(p.data_ref);
        if (p.kind == ProfileKind::load) q.profile_data.load.push_back(read_load_profile(dir / p.data_ref, p.id));
        else q.profile_data.driving.push_back(read_driving_profile(dir / p.data_ref, p.id));
      }
      q.profiles.push_back(std::move(p));
    }
  }
  canonicalize(q);
  return q;
}

Manifest save(const QuarterModel& q, const fs::path& dir) { return CsvBundleStore{}.save(q, dir); }
QuarterModel load(const fs::path& dir) { return CsvBundleStore{}.load(dir); }

}  // namespace quartersim

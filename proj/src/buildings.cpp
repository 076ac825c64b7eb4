#include "quartersim/buildings.hpp"

#include <cmath>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

double ThermalEnvelope::transmission_conductance() const {
  double ua = 0.0;
  for (const auto& s : surfaces) ua += s.u_value * s.area_m2;
  return ua;
}

double ThermalEnvelope::ventilation_conductance() const {
  return kAirDensity * kAirHeatCapacity * air_exchange_per_h * volume_m3 / 3600.0;
}

double heat_loss_w(const ThermalEnvelope& env, double t_inside_c, double t_outside_c) {
  return env.total_conductance() * (t_inside_c - t_outside_c);
}

double nominal_heat_load(const ThermalEnvelope& env, double t_ref_c) {
  if (!(t_ref_c < env.t_indoor_set_c)) {
    throw DomainError("reference ambient temperature must be below the indoor set point");
  }
  return heat_loss_w(env, env.t_indoor_set_c, t_ref_c);
}

double default_thermal_capacitance(double ground_area_m2) {
  return 15.0 * 3.6e6 * ground_area_m2 / 100.0;
}

ArchetypeCatalog::ArchetypeCatalog(std::vector<Archetype> archetypes) : archetypes_(std::move(archetypes)) {}

ArchetypeCatalog ArchetypeCatalog::parse(std::string_view csv_text, std::string_view source) {
  const auto table = csv::parse(csv_text);
  const auto c_id = table.column("archetype_id", source);
  std::vector<Archetype> out;
  for (const auto& row : table.rows) {
    Archetype a;
    a.id = row[c_id];
    auto read = [&](const char* field) {
      const std::string ctx = std::string(source) + " " + a.id + "." + field;
      Bounded b;
      b.nominal = csv::parse_double(row[table.column(field, source)], ctx);
      b.min = b.max = b.nominal;
      if (auto c = table.find_column(std::string(field) + "_min"); c && !row[*c].empty()) {
        b.min = csv::parse_double(row[*c], ctx + "_min");
      }
      if (auto c = table.find_column(std::string(field) + "_max"); c && !row[*c].empty()) {
        b.max = csv::parse_double(row[*c], ctx + "_max");
      }
      if (!(b.min <= b.nominal && b.nominal <= b.max)) {
        throw ParseError(ctx, "nominal value outside [min, max]");
      }
      return b;
    };
    a.ground_area_m2 = read("ground_area_m2");
    a.floors = read("floors");
    a.storey_height_m = read("storey_height_m");
    a.u_wall = read("u_wall");
    a.u_roof = read("u_roof");
    a.u_floor = read("u_floor");
    a.u_window = read("u_window");
    a.window_fraction = read("window_fraction");
    a.air_exchange_per_h = read("air_exchange_per_h");
    a.annual_electric_demand_kwh = read("annual_electric_demand_kwh");
    if (a.ground_area_m2.min <= 0 || a.floors.min < 1 || a.storey_height_m.min <= 0 || a.u_wall.min <= 0 ||
        a.u_roof.min <= 0 || a.u_floor.min <= 0 || a.u_window.min <= 0 || a.window_fraction.min <= 0 ||
        a.window_fraction.max >= 1 || a.air_exchange_per_h.min < 0 || a.annual_electric_demand_kwh.min <= 0) {
      throw ParseError(std::string(source) + " " + a.id, "parameter bounds violate physical limits");
    }
    out.push_back(std::move(a));
  }
  return ArchetypeCatalog(std::move(out));
}

ArchetypeCatalog ArchetypeCatalog::load(const std::filesystem::path& path) {
  return parse(csv::read_text(path), path.filename().string());
}

const Archetype& ArchetypeCatalog::at(std::string_view id) const {
  for (const auto& a : archetypes_) {
    if (a.id == id) return a;
  }
  std::string available;
  for (const auto& a : archetypes_) available += (available.empty() ? "" : ", ") + a.id;
  throw ConfigurationError("unknown archetype '" + std::string(id) + "' (available: " + available + ")");
}

std::vector<std::string> ArchetypeCatalog::ids() const {
  std::vector<std::string> out;
  for (const auto& a : archetypes_) out.push_back(a.id);
  return out;
}

ThermalEnvelope make_envelope(std::string archetype_id, double ground_area_m2, int floors, double storey_height_m,
                              double u_wall, double u_roof, double u_floor, double u_window, double window_fraction,
                              double air_exchange_per_h, double annual_electric_demand_kwh, double t_indoor_set_c) {
  ThermalEnvelope env;
  env.archetype_id = std::move(archetype_id);
  env.ground_area_m2 = ground_area_m2;
  env.floors = floors;
  env.volume_m3 = ground_area_m2 * floors * storey_height_m;
  const double facade = 4.0 * std::sqrt(ground_area_m2) * storey_height_m * floors;
  const double window = window_fraction * facade;
  env.surfaces = {
      {"wall", u_wall, facade - window},
      {"window", u_window, window},
      {"roof", u_roof, ground_area_m2},
      {"floor", u_floor, ground_area_m2},
  };
  env.air_exchange_per_h = air_exchange_per_h;
  env.t_indoor_set_c = t_indoor_set_c;
  env.annual_electric_demand_kwh = annual_electric_demand_kwh;
  env.thermal_capacitance_j_per_k = default_thermal_capacitance(ground_area_m2);
  return env;
}

ThermalEnvelope parameterize_building(const ArchetypeCatalog& catalog, std::string_view archetype_id,
                                      const ScenarioDescription& sd, RngStream& rng) {
  const auto& a = catalog.at(archetype_id);
  const double w = sd.envelope_variance;
  // Every draw is consumed even at w = 0 so the stream position never depends on the variance.
  auto sample = [&](const Bounded& b) {
    const double draw = rng.uniform(b.min, b.max);
    if (w == 0.0) return b.nominal;
    return b.nominal + w * (draw - b.nominal);
  };
  const double ground = sample(a.ground_area_m2);
  const int floors = static_cast<int>(std::lround(sample(a.floors)));
  const double storey = sample(a.storey_height_m);
  const double u_wall = sample(a.u_wall);
  const double u_roof = sample(a.u_roof);
  const double u_floor = sample(a.u_floor);
  const double u_window = sample(a.u_window);
  const double wf = sample(a.window_fraction);
  const double n = sample(a.air_exchange_per_h);
  const double demand = sample(a.annual_electric_demand_kwh);
  return make_envelope(a.id, ground, floors, storey, u_wall, u_roof, u_floor, u_window, wf, n, demand,
                       sd.t_indoor_set_c);
}

}  // namespace quartersim

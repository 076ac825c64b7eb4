#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "quartersim/rng.hpp"
#include "quartersim/scenario.hpp"

namespace quartersim {

inline constexpr double kAirDensity = 1.2;          // kg/m^3
inline constexpr double kAirHeatCapacity = 1005.0;  // J/(kg K)

struct Surface {
  std::string name;
  double u_value = 0.0;  // W/(m^2 K)
  double area_m2 = 0.0;
  bool operator==(const Surface&) const = default;
};

struct ThermalEnvelope {
  std::string archetype_id;
  double ground_area_m2 = 0.0;
  int floors = 1;
  double volume_m3 = 0.0;
  std::vector<Surface> surfaces;
  double air_exchange_per_h = 0.0;
  double t_indoor_set_c = 20.0;
  double annual_electric_demand_kwh = 0.0;
  double thermal_capacitance_j_per_k = 0.0;

  bool operator==(const ThermalEnvelope&) const = default;

  /// Sum of U*A over all surfaces, W/K.
  double transmission_conductance() const;
  /// rho_air * c_p,air * n * V / 3600, W/K.
  double ventilation_conductance() const;
  double total_conductance() const { return transmission_conductance() + ventilation_conductance(); }
};

/// Steady-state transmission + ventilation loss; zero at equal temperatures.
double heat_loss_w(const ThermalEnvelope& env, double t_inside_c, double t_outside_c);

/// Design heat load at the reference ambient temperature. Throws DomainError unless t_ref < t_indoor_set.
double nominal_heat_load(const ThermalEnvelope& env, double t_ref_c);

/// Lumped 1R1C capacitance: 15 kWh/K per 100 m^2 of ground area.
double default_thermal_capacitance(double ground_area_m2);

struct Bounded {
  double nominal = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct Archetype {
  std::string id;
  Bounded ground_area_m2;
  Bounded floors;
  Bounded storey_height_m;
  Bounded u_wall;
  Bounded u_roof;
  Bounded u_floor;
  Bounded u_window;
  /// Window share of the facade area.
  Bounded window_fraction;
  Bounded air_exchange_per_h;
  Bounded annual_electric_demand_kwh;
};

class ArchetypeCatalog {
 public:
  ArchetypeCatalog() = default;
  explicit ArchetypeCatalog(std::vector<Archetype> archetypes);

  /// Columns: archetype_id, then per field `<field>` with optional `<field>_min` / `<field>_max`.
  static ArchetypeCatalog parse(std::string_view csv_text, std::string_view source = "archetypes.csv");
  static ArchetypeCatalog load(const std::filesystem::path& path);

  const Archetype& at(std::string_view id) const;
  std::vector<std::string> ids() const;
  const std::vector<Archetype>& archetypes() const { return archetypes_; }

 private:
  std::vector<Archetype> archetypes_;
};

/// Envelope geometry from concrete parameter values (square footprint, four facades).
ThermalEnvelope make_envelope(std::string archetype_id, double ground_area_m2, int floors, double storey_height_m,
                              double u_wall, double u_roof, double u_floor, double u_window, double window_fraction,
                              double air_exchange_per_h, double annual_electric_demand_kwh, double t_indoor_set_c);

/// Samples every parameter between the archetype nominal value and a uniform draw from
/// [min, max], weighted by sd.envelope_variance. Variance 0 yields the nominal envelope.
ThermalEnvelope parameterize_building(const ArchetypeCatalog& catalog, std::string_view archetype_id,
                                      const ScenarioDescription& sd, RngStream& rng);

}  // namespace quartersim

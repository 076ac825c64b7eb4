#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quartersim/buildings.hpp"
#include "quartersim/profiles.hpp"
#include "quartersim/rng.hpp"
#include "quartersim/scenario.hpp"

namespace quartersim {

enum class HeatMode { ehp, dhn, none };

std::string_view to_string(HeatMode mode);
HeatMode parse_heat_mode(std::string_view text);

struct PvConfig {
  double p_peak_kw = 0.0;
  double gamma_per_k = -0.004;
  bool operator==(const PvConfig&) const = default;
};

struct BesConfig {
  double capacity_kwh = 0.0;
  double p_max_kw = 0.0;
  double soc_min = 0.05;
  double soc_max = 0.95;
  double eta = 0.95;
  bool externally_controllable = false;
  bool operator==(const BesConfig&) const = default;
};

struct BevConfig {
  double capacity_kwh = 0.0;
  double p_charge_kw = 11.0;
  std::string driving_profile_ref;
  bool externally_controllable = false;
  bool operator==(const BevConfig&) const = default;
};

struct EhpConfig {
  double p_th_nominal_kw = 0.0;
  double eta_carnot = 0.45;
  bool operator==(const EhpConfig&) const = default;
};

struct SmartMeterConfig {
  double sigma_p_w = 0.0;
  double sigma_q_var = 0.0;
  bool enabled = true;
  bool operator==(const SmartMeterConfig&) const = default;
};

/// The six prosumer components: PV, BES, BEVs, EHP, inflexible load and smart meter.
struct ProsumerConfig {
  std::string household_id;
  std::optional<PvConfig> pv;
  std::optional<BesConfig> bes;
  std::vector<BevConfig> bevs;
  std::optional<EhpConfig> ehp;
  HeatMode heat_mode = HeatMode::none;
  std::string load_profile_ref;
  /// Multiplier applied to the referenced load profile (annual demand / profile energy).
  double load_scale = 1.0;
  SmartMeterConfig sm;
  bool operator==(const ProsumerConfig&) const = default;
};

std::vector<std::string> validate_prosumer(const ProsumerConfig& pc);

/// Component assignment decided by the scenario realization.
struct ComponentFlags {
  bool pv = false;
  bool bes = false;
  int bevs = 0;
  HeatMode heat_mode = HeatMode::none;
  bool bes_controllable = false;
  bool bev_controllable = false;
};

inline constexpr double kEhpSafetyFactor = 1.2;
inline constexpr double kBevChargerKw = 11.0;

/// EHP rated at 1.2 x NHL; PV peak uniform in [3, 15] kW; BES 1 kWh per kW PV (+-20 %),
/// 5 kWp reference without PV; BEV capacity drawn from {40, 60, 80} kWh with an 11 kW charger.
/// Draws happen in a fixed order regardless of flags.
ProsumerConfig size_components(std::string household_id, const ScenarioDescription& sd, const ThermalEnvelope& env,
                               const ComponentFlags& flags, RngStream& rng);

/// Picks a load profile (scaled to the annual demand) and one driving profile per BEV.
ProsumerConfig assign_profiles(ProsumerConfig pc, const ProfilePool& pool, double annual_demand_kwh, RngStream& rng);

struct Measurement {
  double p_w = 0.0;
  double q_var = 0.0;
};

/// Zero-mean Gaussian noise per channel; a disabled meter reports the true values.
Measurement smart_meter_measure(double true_p_w, double true_q_var, const SmartMeterConfig& sm, RngStream& rng);

}  // namespace quartersim

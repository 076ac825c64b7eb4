#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quartersim/buildings.hpp"
#include "quartersim/profiles.hpp"
#include "quartersim/prosumer.hpp"

namespace quartersim {

inline constexpr double kNoctC = 45.0;
inline constexpr double kHeatPumpSinkC = 35.0;
inline constexpr double kMaxCop = 7.0;
inline constexpr double kThermostatDeadbandK = 0.5;
inline constexpr double kLoadPowerFactor = 0.97;

/// NOCT cell temperature model.
double cell_temperature(double t_ambient_c, double ghi_w_m2);

/// kW, never negative.
double pv_power(double p_peak_kw, double gamma_per_k, double ghi_w_m2, double t_cell_c);

/// Carnot-scaled COP towards a 35 degC sink, capped at kMaxCop.
double heat_pump_cop(double eta_carnot, double t_source_c, double t_sink_c = kHeatPumpSinkC);

struct ThermalState {
  double t_indoor_c = 20.0;
  /// Thermostat memory inside the deadband.
  bool heating = false;
};

struct HeatPumpStep {
  double p_el_kw = 0.0;
  double q_th_kw = 0.0;
  ThermalState state;
};

/// On/off thermostat with hysteresis and one explicit Euler step of the single-node building.
/// Stable for dt < 2 C / UA.
HeatPumpStep heat_pump_step(const ThermalEnvelope& env, ThermalState state, double t_ambient_c, const EhpConfig& ehp,
                            double dt_s);

struct BevStep {
  double p_charge_kw = 0.0;
  double soc = 0.0;
  /// Away consumption that the battery could not cover, kWh.
  double deficit_kwh = 0.0;
};

/// Plugged: charge toward a full battery (or follow the clamped setpoint). Away: discharge by the trip energy.
BevStep bev_step(const BevConfig& bev, double soc, const DrivingSample& sample, double dt_s,
                 std::optional<double> setpoint_kw = std::nullopt);

struct BesStep {
  /// Positive while charging.
  double p_kw = 0.0;
  double soc = 0.0;
};

/// Largest charging and discharging powers the battery accepts for one step.
double bes_charge_limit_kw(const BesConfig& bes, double soc, double dt_s);
double bes_discharge_limit_kw(const BesConfig& bes, double soc, double dt_s);

/// Greedy self-consumption on `residual_kw` (PV minus consumption; positive is surplus)
/// unless a setpoint is given, which is clamped to the feasible range.
BesStep bes_dispatch(const BesConfig& bes, double soc, double residual_kw, double dt_s,
                     std::optional<double> setpoint_kw = std::nullopt);

}  // namespace quartersim

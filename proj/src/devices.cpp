#include "quartersim/devices.hpp"

#include <algorithm>
#include <cmath>

#include "quartersim/error.hpp"

namespace quartersim {

namespace {
constexpr double kKelvin = 273.15;

void require_positive_step(double dt_s) {
  if (!(dt_s > 0.0)) throw DomainError("time step must be positive");
}
}  // namespace

double cell_temperature(double t_ambient_c, double ghi_w_m2) { return t_ambient_c + ghi_w_m2 * (kNoctC - 20.0) / 800.0; }

double pv_power(double p_peak_kw, double gamma_per_k, double ghi_w_m2, double t_cell_c) {
  if (ghi_w_m2 < 0.0) throw DomainError("irradiance must be non-negative");
  return std::max(0.0, p_peak_kw * (ghi_w_m2 / 1000.0) * (1.0 + gamma_per_k * (t_cell_c - 25.0)));
}

double heat_pump_cop(double eta_carnot, double t_source_c, double t_sink_c) {
  const double sink = t_sink_c + kKelvin;
  const double source = t_source_c + kKelvin;
  if (sink <= source) return kMaxCop;
  return std::min(kMaxCop, eta_carnot * sink / (sink - source));
}

HeatPumpStep heat_pump_step(const ThermalEnvelope& env, ThermalState state, double t_ambient_c, const EhpConfig& ehp,
                            double dt_s) {
  require_positive_step(dt_s);
  const double set = env.t_indoor_set_c;
  if (state.t_indoor_c < set - kThermostatDeadbandK) state.heating = true;
  else if (state.t_indoor_c > set + kThermostatDeadbandK) state.heating = false;

  HeatPumpStep out;
  out.q_th_kw = state.heating ? ehp.p_th_nominal_kw : 0.0;
  out.p_el_kw = out.q_th_kw / heat_pump_cop(ehp.eta_carnot, t_ambient_c);
  const double loss_w = env.total_conductance() * (state.t_indoor_c - t_ambient_c);
  state.t_indoor_c += dt_s / env.thermal_capacitance_j_per_k * (out.q_th_kw * 1000.0 - loss_w);
  out.state = state;
  return out;
}

BevStep bev_step(const BevConfig& bev, double soc, const DrivingSample& sample, double dt_s,
                 std::optional<double> setpoint_kw) {
  require_positive_step(dt_s);
  const double hours = dt_s / 3600.0;
  BevStep out;
  out.soc = soc;
  if (!sample.plugged) {
    const double remaining = soc * bev.capacity_kwh - sample.away_kwh;
    if (remaining < 0.0) out.deficit_kwh = -remaining;
    out.soc = std::max(0.0, remaining) / bev.capacity_kwh;
    return out;
  }
  const double limit = std::clamp((1.0 - soc) * bev.capacity_kwh / hours, 0.0, bev.p_charge_kw);
  out.p_charge_kw = setpoint_kw ? std::clamp(*setpoint_kw, 0.0, limit) : limit;
  out.soc = std::min(1.0, soc + out.p_charge_kw * hours / bev.capacity_kwh);
  return out;
}

double bes_charge_limit_kw(const BesConfig& bes, double soc, double dt_s) {
  const double headroom_kwh = std::max(0.0, (bes.soc_max - soc) * bes.capacity_kwh);
  return std::min(bes.p_max_kw, headroom_kwh / (bes.eta * dt_s / 3600.0));
}

double bes_discharge_limit_kw(const BesConfig& bes, double soc, double dt_s) {
  const double available_kwh = std::max(0.0, (soc - bes.soc_min) * bes.capacity_kwh);
  return std::min(bes.p_max_kw, available_kwh * bes.eta / (dt_s / 3600.0));
}

BesStep bes_dispatch(const BesConfig& bes, double soc, double residual_kw, double dt_s,
                     std::optional<double> setpoint_kw) {
  require_positive_step(dt_s);
  const double hours = dt_s / 3600.0;
  const double charge_max = bes_charge_limit_kw(bes, soc, dt_s);
  const double discharge_max = bes_discharge_limit_kw(bes, soc, dt_s);
  const double wanted = setpoint_kw ? *setpoint_kw : residual_kw;
  BesStep out;
  out.p_kw = std::clamp(wanted, -discharge_max, charge_max);
  const double stored = out.p_kw >= 0.0 ? out.p_kw * bes.eta : out.p_kw / bes.eta;
  out.soc = std::clamp(soc + stored * hours / bes.capacity_kwh, bes.soc_min, bes.soc_max);
  return out;
}

}  // namespace quartersim

#include "quartersim/prosumer.hpp"

#include "quartersim/error.hpp"

namespace quartersim {

std::string_view to_string(HeatMode mode) {
  switch (mode) {
    case HeatMode::ehp: return "EHP";
    case HeatMode::dhn: return "DHN";
    case HeatMode::none: return "none";
  }
  return "none";
}

HeatMode parse_heat_mode(std::string_view text) {
  if (text == "EHP") return HeatMode::ehp;
  if (text == "DHN") return HeatMode::dhn;
  if (text == "none") return HeatMode::none;
  throw ParseError("heat_mode", "unknown heat mode '" + std::string(text) + "'");
}

std::vector<std::string> validate_prosumer(const ProsumerConfig& pc) {
  std::vector<std::string> failures;
  const auto& id = pc.household_id;
  if (pc.pv && !(pc.pv->p_peak_kw > 0.0)) failures.push_back(id + ": PV peak power must be positive");
  if (pc.bes) {
    const auto& b = *pc.bes;
    if (!(b.capacity_kwh > 0.0 && b.p_max_kw > 0.0)) failures.push_back(id + ": BES ratings must be positive");
    if (!(0.0 <= b.soc_min && b.soc_min < b.soc_max && b.soc_max <= 1.0)) {
      failures.push_back(id + ": BES requires 0 <= soc_min < soc_max <= 1");
    }
    if (!(b.eta > 0.0 && b.eta <= 1.0)) failures.push_back(id + ": BES efficiency must be in (0, 1]");
  }
  for (const auto& bev : pc.bevs) {
    if (!(bev.capacity_kwh > 0.0 && bev.p_charge_kw > 0.0)) failures.push_back(id + ": BEV ratings must be positive");
  }
  if (pc.ehp && !(pc.ehp->p_th_nominal_kw > 0.0 && pc.ehp->eta_carnot > 0.0 && pc.ehp->eta_carnot <= 1.0)) {
    failures.push_back(id + ": EHP ratings must be positive");
  }
  if (pc.ehp && pc.heat_mode != HeatMode::ehp) failures.push_back(id + ": EHP present but heat mode is not EHP");
  if (!pc.ehp && pc.heat_mode == HeatMode::ehp) failures.push_back(id + ": heat mode EHP without heat pump");
  if (!(pc.load_scale >= 0.0)) failures.push_back(id + ": load scale must be non-negative");
  if (!(pc.sm.sigma_p_w >= 0.0 && pc.sm.sigma_q_var >= 0.0)) failures.push_back(id + ": meter sigma must be >= 0");
  return failures;
}

ProsumerConfig size_components(std::string household_id, const ScenarioDescription& sd, const ThermalEnvelope& env,
                               const ComponentFlags& flags, RngStream& rng) {
  const double pv_peak = rng.uniform(3.0, 15.0);
  const double bes_factor = rng.uniform(0.8, 1.2);
  std::vector<double> bev_capacity;
  for (int i = 0; i < flags.bevs; ++i) {
    constexpr double kCapacities[] = {40.0, 60.0, 80.0};
    bev_capacity.push_back(kCapacities[rng.index(3)]);
  }

  ProsumerConfig pc;
  pc.household_id = std::move(household_id);
  pc.heat_mode = flags.heat_mode;
  pc.sm = SmartMeterConfig{sd.sm_sigma_p_w, sd.sm_sigma_q_var, sd.sm_enabled};

  if (flags.pv) pc.pv = PvConfig{pv_peak, -0.004};
  if (flags.bes) {
    BesConfig bes;
    bes.capacity_kwh = (flags.pv ? pv_peak : 5.0) * bes_factor;
    bes.p_max_kw = 0.5 * bes.capacity_kwh;
    bes.externally_controllable = flags.bes_controllable;
    pc.bes = bes;
  }
  for (double cap : bev_capacity) {
    BevConfig bev;
    bev.capacity_kwh = cap;
    bev.p_charge_kw = kBevChargerKw;
    bev.externally_controllable = flags.bev_controllable;
    pc.bevs.push_back(bev);
  }
  if (flags.heat_mode == HeatMode::ehp) {
    const double nhl = nominal_heat_load(env, sd.t_ref_ambient_c);
    if (!(nhl > 0.0)) throw ConfigurationError(pc.household_id + ": heat pump assigned but nominal heat load is 0");
    pc.ehp = EhpConfig{kEhpSafetyFactor * nhl / 1000.0, 0.45};
  }
  return pc;
}

ProsumerConfig assign_profiles(ProsumerConfig pc, const ProfilePool& pool, double annual_demand_kwh, RngStream& rng) {
  if (pool.load.empty()) throw ProfileError("empty profile pool: load");
  if (!pc.bevs.empty() && pool.driving.empty()) throw ProfileError("empty profile pool: driving");
  const auto& load = pool.load[rng.index(pool.load.size())];
  const double energy = load.energy_kwh();
  if (!(energy > 0.0)) throw ProfileError("load profile " + load.id + " has no energy");
  pc.load_profile_ref = load.id;
  pc.load_scale = annual_demand_kwh / energy;
  for (auto& bev : pc.bevs) bev.driving_profile_ref = pool.driving[rng.index(pool.driving.size())].id;
  return pc;
}

Measurement smart_meter_measure(double true_p_w, double true_q_var, const SmartMeterConfig& sm, RngStream& rng) {
  if (!sm.enabled) return {true_p_w, true_q_var};
  const double noise_p = rng.normal();
  const double noise_q = rng.normal();
  return {true_p_w + sm.sigma_p_w * noise_p, true_q_var + sm.sigma_q_var * noise_q};
}

}  // namespace quartersim

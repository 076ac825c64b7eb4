#include "quartersim/engine.hpp"

#include <cmath>
#include <sstream>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"
#include "quartersim/rng.hpp"

namespace quartersim {

using cplx = std::complex<double>;

ReplaySetpoints ReplaySetpoints::load(const std::filesystem::path& path) {
  const auto t = csv::read_file(path);
  const auto c_time = t.column("timestamp", path.string());
  const auto c_dev = t.column("device_id", path.string());
  const auto c_val = t.column("target_kw", path.string());
  ReplaySetpoints out;
  for (const auto& row : t.rows) {
    out.add(parse_timestamp(row[c_time]), row[c_dev], csv::parse_double(row[c_val], path.string()));
  }
  return out;
}

void ReplaySetpoints::add(Timestamp t, std::string device_id, double target_kw) {
  targets_[std::move(device_id)][t] = target_kw;
}

std::optional<double> ReplaySetpoints::target_kw(Timestamp t, const std::string& device_id) {
  auto dev = targets_.find(device_id);
  if (dev == targets_.end()) return std::nullopt;
  auto it = dev->second.upper_bound(t);
  if (it == dev->second.begin()) return std::nullopt;
  return std::prev(it)->second;
}

namespace {

/// Maps t into the calendar year of a series starting at `series_start`.
template <typename Series>
Timestamp typical_year_time(const Series& s, Timestamp t) {
  if (t >= s.start && t < s.end()) return t;
  const auto civil = std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(t));
  const auto offset = t - year_start(static_cast<int>(civil.year()));
  const auto series_civil = std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(s.start));
  return year_start(static_cast<int>(series_civil.year())) + offset;
}

struct Names {
  std::vector<std::string> lines, trafos;
  std::vector<std::size_t> line_branch, trafo_branch;
};

}  // namespace

ResultSet run_simulation(const SimulationModel& m, Timestamp start, double duration_h, double dt_s,
                         SetpointSource* setpoints, const SimulationOptions& options) {
  if (!(dt_s > 0.0)) throw DomainError("time step must be positive");
  if (!(duration_h > 0.0)) throw DomainError("duration must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(duration_h * 3600.0 / dt_s));
  const auto dt = std::chrono::seconds(static_cast<std::int64_t>(std::llround(dt_s)));
  const Timestamp last = start + dt * static_cast<std::int64_t>(steps > 0 ? steps - 1 : 0);
  if (!m.weather.covers(start, last)) {
    throw ProfileError("weather series does not cover " + format_timestamp(start) + " .. " + format_timestamp(last));
  }

  const auto n_bus = m.admittance.n();
  Names names;
  for (std::size_t b = 0; b < m.branches.size(); ++b) {
    if (m.branches[b].kind == BranchKind::line) {
      names.lines.push_back(m.branches[b].id);
      names.line_branch.push_back(b);
    } else {
      names.trafos.push_back(m.branches[b].id);
      names.trafo_branch.push_back(b);
    }
  }
  std::map<std::string, double> i_max, s_rated;
  for (const auto& l : m.grid.lines) i_max[l.id] = l.i_max_a;
  for (const auto& t : m.grid.transformers) s_rated[t.id] = t.s_rated_mva;

  ResultSet r;
  r.seed = m.seed;
  r.dt_s = dt_s;
  auto& vm = r.families[family::kBusVm];
  auto& va = r.families[family::kBusVa];
  vm.ids = va.ids = m.admittance.bus_ids;
  auto& line_i = r.families[family::kLineCurrent];
  auto& line_load = r.families[family::kLineLoading];
  line_i.ids = line_load.ids = names.lines;
  auto& tr_s = r.families[family::kTrafoS];
  auto& tr_p = r.families[family::kTrafoP];
  auto& tr_load = r.families[family::kTrafoLoading];
  tr_s.ids = tr_p.ids = tr_load.ids = names.trafos;
  auto& hp = r.families[family::kHouseholdP];
  auto& hq = r.families[family::kHouseholdQ];
  auto& hpm = r.families[family::kHouseholdPMeasured];
  auto& hqm = r.families[family::kHouseholdQMeasured];
  auto& t_in = r.families[family::kIndoorTemperature];
  auto& bes_soc = r.families[family::kBesSoc];
  auto& bev_soc = r.families[family::kBevSoc];
  for (const auto& p : m.prosumers) {
    hp.ids.push_back(p.household_id);
    t_in.ids.push_back(p.household_id);
    if (p.config.bes) bes_soc.ids.push_back("bes/" + p.household_id);
    for (std::size_t k = 0; k < p.config.bevs.size(); ++k) bev_soc.ids.push_back("bev/" + p.household_id + "/" + std::to_string(k));
  }
  hq.ids = hpm.ids = hqm.ids = hp.ids;
  auto& pipe_flow = r.families[family::kPipeFlow];
  if (m.dhn) {
    for (const auto& p : m.dhn->pipes) pipe_flow.ids.push_back(p.id);
  }
  auto& system = r.families[family::kSystem];
  system.ids = {"slack_p_mw", "slack_q_mvar", "losses_mw"};

  // controllable devices by household
  std::map<std::string, std::string> bes_channel;
  std::map<std::pair<std::string, std::size_t>, std::string> bev_channel;
  for (const auto& c : m.setpoint_channels) {
    if (c.kind == DeviceKind::bes) bes_channel[c.household_id] = c.device_id;
    else bev_channel[{c.household_id, c.bev_index}] = c.device_id;
  }

  std::vector<DeviceState> state;
  std::vector<RngStream> meters;
  for (const auto& p : m.prosumers) {
    state.push_back(p.initial);
    meters.push_back(RngStream::derive(m.seed, "sm/" + p.household_id));
  }
  const double tan_phi = std::tan(std::acos(kLoadPowerFactor));

  for (std::size_t k = 0; k < steps; ++k) {
    const Timestamp t = start + dt * static_cast<std::int64_t>(k);
    r.time.push_back(t);
    const auto w = m.weather.at(t);
    const double t_cell = cell_temperature(w.t_ambient_c, w.ghi_w_m2);

    std::vector<cplx> s_spec(n_bus, cplx{});
    std::vector<double> dhn_demand(m.dhn ? m.dhn->vertices.size() : 0, 0.0);
    std::vector<double> p_row, q_row, pm_row, qm_row, tin_row, bes_row, bev_row;
    const auto previous = state;

    for (std::size_t i = 0; i < m.prosumers.size(); ++i) {
      const auto& p = m.prosumers[i];
      auto& st = state[i];
      const auto& c = p.config;
      const double load_kw = c.load_scale * p.load.at(typical_year_time(p.load, t));
      const double pv_kw = c.pv ? pv_power(c.pv->p_peak_kw, c.pv->gamma_per_k, w.ghi_w_m2, t_cell) : 0.0;

      double hp_kw = 0.0;
      if (c.heat_mode == HeatMode::ehp && c.ehp) {
        const auto step = heat_pump_step(p.envelope, st.thermal, w.t_ambient_c, *c.ehp, dt_s);
        hp_kw = step.p_el_kw;
        st.thermal = step.state;
      } else if (c.heat_mode == HeatMode::dhn && p.dhn_vertex) {
        // the substation holds the set temperature
        dhn_demand[*p.dhn_vertex] += std::max(0.0, heat_loss_w(p.envelope, p.envelope.t_indoor_set_c, w.t_ambient_c));
      }

      double bev_kw = 0.0;
      for (std::size_t b = 0; b < c.bevs.size(); ++b) {
        const auto& drive = p.driving[b];
        const auto sample = drive.at(typical_year_time(drive, t), dt_s);
        std::optional<double> target;
        if (setpoints) {
          if (auto ch = bev_channel.find({p.household_id, b}); ch != bev_channel.end()) target = setpoints->target_kw(t, ch->second);
        }
        const auto step = bev_step(c.bevs[b], st.bev_soc[b], sample, dt_s, target);
        if (step.deficit_kwh > 0.0) {
          r.warnings.push_back(format_timestamp(t) + " bev/" + p.household_id + "/" + std::to_string(b) +
                               ": energy deficit " + csv::format_double(step.deficit_kwh) + " kWh");
        }
        bev_kw += step.p_charge_kw;
        st.bev_soc[b] = step.soc;
        bev_row.push_back(step.soc);
      }

      double bes_kw = 0.0;
      if (c.bes) {
        std::optional<double> target;
        if (setpoints) {
          if (auto ch = bes_channel.find(p.household_id); ch != bes_channel.end()) target = setpoints->target_kw(t, ch->second);
        }
        const auto step = bes_dispatch(*c.bes, st.bes_soc, pv_kw - load_kw - bev_kw - hp_kw, dt_s, target);
        bes_kw = step.p_kw;
        st.bes_soc = step.soc;
        bes_row.push_back(step.soc);
      }

      const double p_w = (load_kw + hp_kw + bev_kw + bes_kw - pv_kw) * 1e3;
      const double q_var = load_kw * tan_phi * 1e3;
      const auto measured = smart_meter_measure(p_w, q_var, c.sm, meters[i]);
      p_row.push_back(p_w);
      q_row.push_back(q_var);
      pm_row.push_back(measured.p_w);
      qm_row.push_back(measured.q_var);
      tin_row.push_back(st.thermal.t_indoor_c);
      s_spec[p.bus] -= cplx{p_w, q_var} / (m.base_mva * 1e6);
    }

    PowerFlowResult pf;
    try {
      pf = solve_power_flow(m.admittance, s_spec, m.slack, options.power_flow);
    } catch (const Error& e) {
      throw SimulationError("step " + std::to_string(k) + " (" + format_timestamp(t) + "): " + e.what(), k, previous);
    }
    const auto& v = pf.voltage;

    std::vector<double> vm_row(n_bus), va_row(n_bus);
    for (std::size_t b = 0; b < n_bus; ++b) {
      vm_row[b] = std::abs(v[b]);
      va_row[b] = std::arg(v[b]);
    }
    std::vector<double> li_row, ll_row, ts_row, tp_row, tl_row;
    for (auto b : names.line_branch) {
      const auto& br = m.branches[b];
      const double amps = std::abs(br.y_series * (v[br.from] - v[br.to])) * br.i_base_a;
      li_row.push_back(amps);
      ll_row.push_back(amps / i_max.at(br.id) * 100.0);
    }
    for (auto b : names.trafo_branch) {
      const auto& br = m.branches[b];
      const cplx i = br.y_series * (v[br.from] - v[br.to]);
      const cplx s_hv = v[br.from] * std::conj(i) * m.base_mva;
      const cplx s_lv = v[br.to] * std::conj(i) * m.base_mva;
      const double s = std::max(std::abs(s_hv), std::abs(s_lv));
      ts_row.push_back(s);
      tp_row.push_back(s_hv.real());
      tl_row.push_back(s / s_rated.at(br.id) * 100.0);
    }
    const auto s_bus = bus_injections(m.admittance, v);
    cplx total{};
    for (const auto& s : s_bus) total += s;
    const cplx slack = s_bus[m.slack] * m.base_mva;

    if (m.dhn) {
      auto flow = solve_dhn(*m.dhn, dhn_demand);
      for (auto& wmsg : flow.warnings) r.warnings.push_back(format_timestamp(t) + " " + wmsg);
      pipe_flow.rows.push_back(std::move(flow.pipe_mass_flow_kg_s));
    } else {
      pipe_flow.rows.emplace_back();
    }

    vm.rows.push_back(std::move(vm_row));
    va.rows.push_back(std::move(va_row));
    line_i.rows.push_back(std::move(li_row));
    line_load.rows.push_back(std::move(ll_row));
    tr_s.rows.push_back(std::move(ts_row));
    tr_p.rows.push_back(std::move(tp_row));
    tr_load.rows.push_back(std::move(tl_row));
    hp.rows.push_back(std::move(p_row));
    hq.rows.push_back(std::move(q_row));
    hpm.rows.push_back(std::move(pm_row));
    hqm.rows.push_back(std::move(qm_row));
    t_in.rows.push_back(std::move(tin_row));
    bes_soc.rows.push_back(std::move(bes_row));
    bev_soc.rows.push_back(std::move(bev_row));
    system.rows.push_back({slack.real(), slack.imag(), total.real() * m.base_mva});
  }
  return r;
}

}  // namespace quartersim

#include "quartersim/simgen.hpp"

#include <map>
#include <sstream>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

namespace fs = std::filesystem;

std::string household_bus_id(std::string_view household_id) { return "hh/" + std::string(household_id); }

GridTopology simulation_grid(const QuarterModel& q) {
  GridTopology g;
  auto layer_of = [&](const NodeRecord& n) { return layer_for_voltage(n.vn_kv); };
  for (const auto& n : q.nodes) g.buses.push_back({n.id, n.vn_kv, n.kind, n.coord, n.cell_ref, layer_of(n)});
  for (const auto& h : q.households) {
    const auto* node = q.find_node(h.node_ref);
    if (!node) throw AssemblyError("household " + h.id + " references unknown node " + h.node_ref);
    g.buses.push_back({household_bus_id(h.id), node->vn_kv, BusKind::pq, node->coord, node->cell_ref, layer_of(*node)});
    g.load_anchors.push_back({h.id, household_bus_id(h.id)});
  }
  for (const auto& l : q.lines) {
    const auto from = l.endpoint_a_kind == EndpointKind::household ? household_bus_id(l.endpoint_a) : l.endpoint_a;
    g.lines.push_back({l.id, from, l.endpoint_b, l.r_ohm_per_km, l.x_ohm_per_km, l.length_km, l.i_max_a});
  }
  g.transformers = q.transformers;
  return g;
}

SimulationModel assemble_simulation(const QuarterModel& q, const WeatherSeries& weather) {
  if (auto violations = validate(q); !violations.empty()) {
    std::vector<std::string> msgs;
    for (const auto& v : violations) msgs.push_back(to_string(v));
    throw ValidationError(std::move(msgs));
  }
  SimulationModel m;
  m.name = q.scenario.name;
  m.seed = q.scenario.seed;
  m.base_mva = q.settings.base_mva;
  m.grid = simulation_grid(q);
  m.branches = build_branches(m.grid, m.base_mva);
  m.admittance = build_admittance(m.grid, m.base_mva);
  m.weather = weather;

  std::map<std::string, std::size_t> bus_index;
  for (std::size_t i = 0; i < m.admittance.bus_ids.size(); ++i) bus_index[m.admittance.bus_ids[i]] = i;
  for (const auto& n : q.nodes) {
    if (n.kind == BusKind::slack) m.slack = bus_index.at(n.id);
  }

  std::map<std::string, std::size_t> vertex_index;
  if (!q.dhn_vertices.empty()) {
    m.dhn = dhn_network(q);
    for (std::size_t i = 0; i < m.dhn->vertices.size(); ++i) vertex_index[m.dhn->vertices[i].node_ref] = i;
  }

  for (const auto& h : q.households) {
    ProsumerInstance p;
    p.household_id = h.id;
    p.config = h.config;
    p.envelope = h.envelope;
    p.bus = bus_index.at(household_bus_id(h.id));
    if (h.config.heat_mode == HeatMode::dhn) {
      auto it = vertex_index.find(h.node_ref);
      if (it == vertex_index.end()) throw AssemblyError("household " + h.id + ": node " + h.node_ref + " has no DHN vertex");
      p.dhn_vertex = it->second;
    }
    const auto* load = q.profile_data.find_load(h.config.load_profile_ref);
    if (!load) throw AssemblyError("household " + h.id + ": no data for load profile " + h.config.load_profile_ref);
    p.load = *load;
    for (std::size_t k = 0; k < h.config.bevs.size(); ++k) {
      const auto& bev = h.config.bevs[k];
      const auto* drive = q.profile_data.find_driving(bev.driving_profile_ref);
      if (!drive) throw AssemblyError("household " + h.id + ": no data for driving profile " + bev.driving_profile_ref);
      p.driving.push_back(*drive);
      p.initial.bev_soc.push_back(0.8);
      if (bev.externally_controllable) {
        m.setpoint_channels.push_back({"bev/" + h.id + "/" + std::to_string(k), h.id, DeviceKind::bev, k});
      }
    }
    if (h.config.bes) {
      p.initial.bes_soc = 0.5 * (h.config.bes->soc_min + h.config.bes->soc_max);
      if (h.config.bes->externally_controllable) m.setpoint_channels.push_back({"bes/" + h.id, h.id, DeviceKind::bes, 0});
    }
    p.initial.thermal.t_indoor_c = h.envelope.t_indoor_set_c;
    m.prosumers.push_back(std::move(p));
  }
  return m;
}

namespace {

std::string ident(std::string_view prefix, std::string_view id) {
  std::string out(prefix);
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

std::string num(double v) { return csv::format_double(v); }

std::string model_name(const QuarterModel& q) { return ident("Quarter_", q.scenario.name); }

}  // namespace

std::string emit_model_text(const QuarterModel& input) {
  QuarterModel q = input;
  canonicalize(q);
  std::ostringstream o;
  const auto name = model_name(q);
  o << "within;\n";
  o << "model " << name << " \"Living quarter '" << q.scenario.name << "', seed " << q.scenario.seed << "\"\n";
  o << "  // electric grid\n";
  for (const auto& n : q.nodes) {
    o << "  CyEntEE.Grid.Node " << ident("n_", n.id) << "(v_n=" << num(n.vn_kv * 1e3) << ", isSlack="
      << (n.kind == BusKind::slack ? "true" : "false") << ");\n";
  }
  for (const auto& t : q.transformers) {
    o << "  CyEntEE.Grid.Transformer " << ident("tr_", t.id) << "(S_r=" << num(t.s_rated_mva * 1e6)
      << ", u_k=" << num(t.vk_percent) << ", u_kr=" << num(t.vkr_percent) << ");\n";
  }
  for (const auto& l : q.lines) {
    o << "  CyEntEE.Grid.Cable " << ident("l_", l.id) << "(r=" << num(l.r_ohm_per_km) << ", x=" << num(l.x_ohm_per_km)
      << ", length=" << num(l.length_km * 1e3) << ", i_max=" << num(l.i_max_a) << ");\n";
  }
  o << "  // prosumers\n";
  for (const auto& h : q.households) {
    const auto& c = h.config;
    o << "  CyEntEE.Prosumer.Household " << ident("hh_", h.id) << "(\n";
    o << "    archetype=\"" << h.envelope.archetype_id << "\",\n";
    o << "    UA=" << num(h.envelope.total_conductance()) << ", C=" << num(h.envelope.thermal_capacitance_j_per_k)
      << ", T_set=" << num(h.envelope.t_indoor_set_c + 273.15) << ",\n";
    o << "    heatMode=\"" << to_string(c.heat_mode) << "\",\n";
    o << "    P_pv_peak=" << num(c.pv ? c.pv->p_peak_kw * 1e3 : 0.0) << ",\n";
    o << "    E_bes=" << num(c.bes ? c.bes->capacity_kwh * 3.6e6 : 0.0)
      << ", P_bes_max=" << num(c.bes ? c.bes->p_max_kw * 1e3 : 0.0) << ",\n";
    o << "    nBEV=" << c.bevs.size();
    for (std::size_t k = 0; k < c.bevs.size(); ++k) {
      o << ", E_bev_" << k + 1 << "=" << num(c.bevs[k].capacity_kwh * 3.6e6);
    }
    o << ",\n";
    o << "    Q_flow_hp_nom=" << num(c.ehp ? c.ehp->p_th_nominal_kw * 1e3 : 0.0) << ",\n";
    o << "    loadProfile=\"" << c.load_profile_ref << "\", loadScale=" << num(c.load_scale) << ",\n";
    o << "    sigma_P=" << num(c.sm.sigma_p_w) << ", sigma_Q=" << num(c.sm.sigma_q_var) << ");\n";
  }
  if (!q.pipes.empty()) o << "  // district heating\n";
  for (const auto& p : q.pipes) {
    o << "  CyEntEE.Heat.Pipe " << ident("p_", p.id) << "(length=" << num(p.length_m) << ", d_i=" << num(p.inner_diameter_m)
      << ", m_flow_nom=" << num(p.nominal_mass_flow_kg_s) << ", dn=\"" << p.dn_label << "\");\n";
  }
  o << "equation\n";
  for (const auto& t : q.transformers) {
    o << "  connect(" << ident("n_", t.hv_bus) << ".epp, " << ident("tr_", t.id) << ".epp_a);\n";
    o << "  connect(" << ident("tr_", t.id) << ".epp_b, " << ident("n_", t.lv_bus) << ".epp);\n";
  }
  for (const auto& l : q.lines) {
    const auto a = l.endpoint_a_kind == EndpointKind::household ? ident("hh_", l.endpoint_a) : ident("n_", l.endpoint_a);
    o << "  connect(" << a << ".epp, " << ident("l_", l.id) << ".epp_a);\n";
    o << "  connect(" << ident("l_", l.id) << ".epp_b, " << ident("n_", l.endpoint_b) << ".epp);\n";
  }
  for (const auto& p : q.pipes) {
    const auto a = p.endpoint_a_kind == EndpointKind::household ? ident("hh_", p.endpoint_a) : ident("n_", p.endpoint_a);
    o << "  connect(" << a << ".fluidPort, " << ident("p_", p.id) << ".port_a);\n";
    o << "  connect(" << ident("p_", p.id) << ".port_b, " << ident("n_", p.endpoint_b) << ".fluidPort);\n";
  }
  o << "end " << name << ";\n";
  return o.str();
}

std::vector<fs::path> emit_dynamic_model_text(const QuarterModel& q, const fs::path& out_dir) {
  if (auto violations = validate(q); !violations.empty()) {
    std::vector<std::string> msgs;
    for (const auto& v : violations) msgs.push_back(to_string(v));
    throw ValidationError(std::move(msgs));
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const auto path = out_dir / (model_name(q) + ".mo");
  csv::write_text(path, emit_model_text(q));
  return {path};
}

}  // namespace quartersim

#include "quartersim/quarter.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "quartersim/error.hpp"

namespace quartersim {

std::string_view to_string(EndpointKind kind) { return kind == EndpointKind::node ? "node" : "household"; }

EndpointKind parse_endpoint_kind(std::string_view text) {
  if (text == "node") return EndpointKind::node;
  if (text == "household") return EndpointKind::household;
  throw ParseError("endpoint_a_kind", "unknown endpoint kind '" + std::string(text) + "'");
}

const NodeRecord* QuarterModel::find_node(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id, [](const NodeRecord& n, std::string_view key) { return n.id < key; });
  if (it != nodes.end() && it->id == id) return &*it;
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const HouseholdRecord* QuarterModel::find_household(std::string_view id) const {
  for (const auto& h : households) {
    if (h.id == id) return &h;
  }
  return nullptr;
}

void canonicalize(QuarterModel& q) {
  auto by_id = [](auto& v) { std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.id < b.id; }); };
  by_id(q.grid_layers);
  by_id(q.cells);
  by_id(q.nodes);
  by_id(q.lines);
  by_id(q.transformers);
  by_id(q.households);
  by_id(q.pipes);
  by_id(q.profiles);
  by_id(q.profile_data.load);
  by_id(q.profile_data.driving);
  std::stable_sort(q.dhn_vertices.begin(), q.dhn_vertices.end(),
                   [](const auto& a, const auto& b) { return a.node_ref < b.node_ref; });
}

std::string to_string(const Violation& v) { return v.table + "[" + v.row_id + "]: " + v.rule; }

std::vector<Violation> validate(const QuarterModel& q) {
  std::vector<Violation> out;
  auto flag = [&out](std::string table, std::string row, std::string rule) {
    out.push_back({std::move(table), std::move(row), std::move(rule)});
  };
  auto duplicates = [&](const auto& rows, const char* table) {
    std::set<std::string> seen;
    for (const auto& r : rows) {
      if (!seen.insert(r.id).second) flag(table, r.id, "duplicate id");
    }
    return seen;
  };
  const auto layer_ids = duplicates(q.grid_layers, "grid_layers");
  const auto cell_ids = duplicates(q.cells, "cells");
  const auto node_ids = duplicates(q.nodes, "nodes");
  duplicates(q.lines, "lines");
  duplicates(q.transformers, "transformers");
  const auto household_ids = duplicates(q.households, "households");
  duplicates(q.pipes, "pipes");

  std::map<std::string, ProfileKind> profile_kind;
  for (const auto& p : q.profiles) {
    if (!profile_kind.emplace(p.id, p.kind).second) flag("profiles", p.id, "duplicate id");
  }

  for (const auto& c : q.cells) {
    if (!layer_ids.count(c.layer_ref)) flag("cells", c.id, "dangling layer ref");
  }
  int slack_count = 0;
  for (const auto& n : q.nodes) {
    if (!cell_ids.count(n.cell_ref)) flag("nodes", n.id, "dangling cell ref");
    if (!(n.vn_kv > 0.0)) flag("nodes", n.id, "vn_kv must be positive");
    if (n.kind == BusKind::slack) ++slack_count;
  }
  if (slack_count != 1) flag("nodes", "*", "exactly one slack node required");

  std::map<std::string, std::vector<const LineRecord*>> lines_of_household;
  for (const auto& l : q.lines) {
    if (!node_ids.count(l.endpoint_b)) flag("lines", l.id, "dangling node ref");
    if (l.endpoint_a_kind == EndpointKind::node) {
      if (!node_ids.count(l.endpoint_a)) flag("lines", l.id, "dangling node ref");
      if (l.endpoint_a == l.endpoint_b) flag("lines", l.id, "endpoints must differ");
    } else {
      if (!household_ids.count(l.endpoint_a)) flag("lines", l.id, "dangling household ref");
      lines_of_household[l.endpoint_a].push_back(&l);
    }
    if (!(l.length_km > 0.0 && l.i_max_a > 0.0)) flag("lines", l.id, "length and current rating must be positive");
  }
  for (const auto& t : q.transformers) {
    if (!node_ids.count(t.hv_bus) || !node_ids.count(t.lv_bus)) flag("transformers", t.id, "dangling node ref");
    if (!(t.s_rated_mva > 0.0)) flag("transformers", t.id, "rating must be positive");
  }

  std::map<std::string, int> pipes_of_household;
  std::vector<const PipeRecord*> trunk;
  for (const auto& p : q.pipes) {
    if (!node_ids.count(p.endpoint_b)) flag("pipes", p.id, "dangling node ref");
    if (p.endpoint_a_kind == EndpointKind::household) {
      if (!household_ids.count(p.endpoint_a)) flag("pipes", p.id, "dangling household ref");
      ++pipes_of_household[p.endpoint_a];
    } else {
      if (!node_ids.count(p.endpoint_a)) flag("pipes", p.id, "dangling node ref");
      trunk.push_back(&p);
    }
    if (!(p.length_m > 0.0 && p.inner_diameter_m > 0.0)) flag("pipes", p.id, "length and diameter must be positive");
  }

  for (const auto& h : q.households) {
    if (!node_ids.count(h.node_ref)) flag("households", h.id, "dangling node ref");
    const auto& lines = lines_of_household[h.id];
    if (lines.size() != 1) {
      flag("households", h.id, "exactly one line");
    } else if (lines.front()->endpoint_b != h.node_ref) {
      flag("households", h.id, "line endpoint disagrees with node_ref");
    }
    const int pipes = pipes_of_household[h.id];
    if (pipes > 1) flag("households", h.id, "zero or one pipe");
    if (h.config.heat_mode == HeatMode::dhn && pipes != 1) flag("households", h.id, "DHN household needs its pipe");
    if (h.config.heat_mode != HeatMode::dhn && pipes != 0) flag("households", h.id, "pipe without DHN heat mode");
    if (h.config.household_id != h.id) flag("households", h.id, "prosumer config belongs to another household");
    auto lp = profile_kind.find(h.config.load_profile_ref);
    if (lp == profile_kind.end() || lp->second != ProfileKind::load) flag("households", h.id, "exactly one load profile");
    for (const auto& bev : h.config.bevs) {
      auto dp = profile_kind.find(bev.driving_profile_ref);
      if (dp == profile_kind.end() || dp->second != ProfileKind::driving) {
        flag("households", h.id, "dangling driving profile ref");
      }
    }
    for (const auto& msg : validate_prosumer(h.config)) flag("households", h.id, msg);
  }

  // DHN trunk forest over the vertex table
  std::map<std::string, std::size_t> vertex_index;
  for (const auto& v : q.dhn_vertices) {
    if (!node_ids.count(v.node_ref)) flag("dhn_vertices", v.node_ref, "dangling node ref");
    if (!vertex_index.emplace(v.node_ref, vertex_index.size()).second) flag("dhn_vertices", v.node_ref, "duplicate id");
  }
  std::vector<std::size_t> parent(vertex_index.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto* p : trunk) {
    auto a = vertex_index.find(p->endpoint_a);
    auto b = vertex_index.find(p->endpoint_b);
    if (a == vertex_index.end() || b == vertex_index.end()) {
      flag("pipes", p->id, "trunk pipe endpoint is not a DHN vertex");
      continue;
    }
    const auto ra = find(a->second);
    const auto rb = find(b->second);
    if (ra == rb) flag("pipes", p->id, "DHN cycle");
    else parent[ra] = rb;
  }
  return out;
}

DhnNetwork dhn_network(const QuarterModel& q) {
  DhnNetwork net;
  net.t_supply_c = q.scenario.dhn.t_supply_c;
  net.t_return_c = q.scenario.dhn.t_return_c;
  net.v_max_m_s = q.scenario.dhn.v_max_m_s;
  net.rho_water = q.settings.rho_water;
  net.cp_water = q.settings.cp_water;
  std::map<std::string, std::size_t> index;
  for (const auto& v : q.dhn_vertices) {
    const auto* node = q.find_node(v.node_ref);
    if (!node) throw IntegrityError("DHN vertex references unknown node " + v.node_ref);
    index[v.node_ref] = net.vertices.size();
    net.vertices.push_back({v.node_ref, node->coord, v.nhl_w, v.is_source});
  }
  for (const auto& p : q.pipes) {
    if (p.endpoint_a_kind != EndpointKind::node) continue;
    DhnPipe pipe;
    pipe.id = p.id;
    pipe.upstream = index.at(p.endpoint_a);
    pipe.downstream = index.at(p.endpoint_b);
    pipe.length_m = p.length_m;
    pipe.nominal_mass_flow_kg_s = p.nominal_mass_flow_kg_s;
    pipe.inner_diameter_m = p.inner_diameter_m;
    pipe.dn_label = p.dn_label;
    net.pipes.push_back(std::move(pipe));
  }
  return net;
}

}  // namespace quartersim

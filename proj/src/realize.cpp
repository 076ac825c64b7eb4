#include "quartersim/realize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "quartersim/error.hpp"
#include "quartersim/rng.hpp"

namespace quartersim {

#ifndef QUARTERSIM_DATA_DIR
#define QUARTERSIM_DATA_DIR "data"
#endif

std::filesystem::path default_archetype_path() { return std::filesystem::path(QUARTERSIM_DATA_DIR) / "archetypes.csv"; }

std::size_t share_count(double share, std::size_t n) {
  return static_cast<std::size_t>(std::llround(share * static_cast<double>(n)));
}

std::map<std::string, std::size_t> apportion(const std::map<std::string, int>& weights, std::size_t n) {
  long long total = 0;
  for (const auto& [id, w] : weights) total += w;
  std::map<std::string, std::size_t> out;
  if (total <= 0) throw ConfigurationError("archetype weights must sum to a positive number");
  struct Rest {
    long long remainder;
    std::string id;
  };
  std::vector<Rest> rests;
  std::size_t assigned = 0;
  for (const auto& [id, w] : weights) {
    const long long scaled = static_cast<long long>(w) * static_cast<long long>(n);
    out[id] = static_cast<std::size_t>(scaled / total);
    assigned += out[id];
    rests.push_back({scaled % total, id});
  }
  std::stable_sort(rests.begin(), rests.end(), [](const Rest& a, const Rest& b) { return a.remainder > b.remainder; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++out[rests[i % rests.size()].id];
  return out;
}

namespace {

std::vector<bool> pick(std::uint64_t seed, const char* tag, std::size_t n, std::size_t k) {
  auto rng = RngStream::derive(seed, tag);
  std::vector<bool> chosen(n, false);
  for (auto i : sample_without_replacement(rng, n, k)) chosen[i] = true;
  return chosen;
}

/// Chooses k of the flagged positions.
std::vector<bool> pick_among(std::uint64_t seed, const char* tag, const std::vector<bool>& eligible, double share) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (eligible[i]) pool.push_back(i);
  }
  std::vector<bool> chosen(eligible.size(), false);
  const auto sub = pick(seed, tag, pool.size(), share_count(share, pool.size()));
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (sub[j]) chosen[pool[j]] = true;
  }
  return chosen;
}

struct CellDhn {
  std::map<std::string, double> nhl_by_node;
};

/// Node ids on the electric paths from `source` to every terminal inside one cell.
std::set<std::string> steiner_nodes(const GridTopology& grid, const std::string& cell, const std::string& source,
                                    const std::map<std::string, double>& terminals) {
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& l : grid.lines) {
    const auto* a = grid.find_bus(l.from_bus);
    const auto* b = grid.find_bus(l.to_bus);
    if (!a || !b || a->cell_id != cell || b->cell_id != cell) continue;
    adjacency[l.from_bus].push_back(l.to_bus);
    adjacency[l.to_bus].push_back(l.from_bus);
  }
  std::map<std::string, std::string> parent{{source, source}};
  std::vector<std::string> queue{source};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    auto& next = adjacency[queue[k]];
    std::sort(next.begin(), next.end());
    for (const auto& w : next) {
      if (parent.emplace(w, queue[k]).second) queue.push_back(w);
    }
  }
  std::set<std::string> keep{source};
  for (const auto& [node, nhl] : terminals) {
    if (!parent.count(node)) throw TopologyError("DHN consumer node " + node + " is not connected to its plant in cell " + cell);
    for (auto v = node; keep.insert(v).second; v = parent[v]) {
    }
  }
  return keep;
}

}  // namespace

QuarterModel realize_quarter(const ScenarioDescription& sd, const GridTopology& grid, const RealizeOptions& options) {
  if (grid.load_anchors.empty()) throw ConfigurationError("no household anchors");
  if (auto report = validate_topology(grid); !report.empty()) throw ValidationError(report.messages());
  if (auto failures = validate_scenario(sd); !failures.empty()) throw ValidationError(failures);

  const ArchetypeCatalog catalog = options.catalog ? *options.catalog : ArchetypeCatalog::load(default_archetype_path());
  for (const auto& [id, count] : sd.households_per_archetype) catalog.at(id);

  QuarterModel q;
  q.scenario = sd;

  // grid tables
  std::map<std::string, Layer> cell_layer;
  std::set<Layer> layers;
  for (const auto& b : grid.buses) {
    cell_layer.emplace(b.cell_id, b.layer);
    layers.insert(b.layer);
    q.nodes.push_back({b.id, b.cell_id, b.coord, b.vn_kv, b.kind});
  }
  for (auto layer : layers) q.grid_layers.push_back({std::string(to_string(layer)), layer});
  for (const auto& [cell, layer] : cell_layer) q.cells.push_back({cell, std::string(to_string(layer))});
  for (const auto& l : grid.lines) {
    q.lines.push_back({l.id, EndpointKind::node, l.from_bus, l.to_bus, l.r_ohm_per_km, l.x_ohm_per_km, l.length_km, l.i_max_a});
  }
  q.transformers = grid.transformers;

  // households in anchor-id order
  auto anchors = grid.load_anchors;
  std::sort(anchors.begin(), anchors.end(), [](const LoadAnchor& a, const LoadAnchor& b) { return a.id < b.id; });
  const std::size_t n = anchors.size();
  const auto seed = sd.seed;

  const auto has_pv = pick(seed, "assign/pv", n, share_count(sd.pv_share, n));
  const auto has_bes = pick(seed, "assign/bes", n, share_count(sd.bes_share, n));
  const auto has_bev = pick(seed, "assign/bev", n, share_count(sd.bev_share, n));
  const auto bes_ctrl = pick_among(seed, "assign/bes_controllable", has_bes, sd.controllable_bes_share);
  const auto bev_ctrl = pick_among(seed, "assign/bev_controllable", has_bev, sd.controllable_bev_share);

  std::vector<HeatMode> heat(n, HeatMode::none);
  {
    auto rng = RngStream::derive(seed, "assign/heat");
    const auto order = permutation(rng, n);
    const auto n_ehp = std::min(n, share_count(sd.ehp_share, n));
    const auto n_dhn = std::min(n - n_ehp, share_count(sd.dhn_share, n));
    for (std::size_t k = 0; k < n_ehp + n_dhn; ++k) heat[order[k]] = k < n_ehp ? HeatMode::ehp : HeatMode::dhn;
  }

  std::vector<std::string> archetype(n);
  {
    std::vector<std::string> slots;
    for (const auto& [id, count] : apportion(sd.households_per_archetype, n)) slots.insert(slots.end(), count, id);
    auto rng = RngStream::derive(seed, "assign/archetype");
    const auto order = permutation(rng, n);
    for (std::size_t k = 0; k < n; ++k) archetype[order[k]] = slots[k];
  }

  ProfilePool pool;
  if (options.pool) {
    pool = *options.pool;
  } else {
    auto rng = RngStream::derive(seed, "pool");
    pool = synthetic_pool(sd.profile_year, sd.profile_pool_size, rng.next_u64());
  }

  std::map<std::string, CellDhn> dhn_cells;
  std::map<std::string, double> household_nhl;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& anchor = anchors[i];
    HouseholdRecord h;
    h.id = anchor.id;
    h.node_ref = anchor.bus;
    auto env_rng = RngStream::derive(seed, "envelope/" + h.id);
    h.envelope = parameterize_building(catalog, archetype[i], sd, env_rng);

    ComponentFlags flags;
    flags.pv = has_pv[i];
    flags.bes = has_bes[i];
    flags.bevs = has_bev[i] ? 1 : 0;
    flags.heat_mode = heat[i];
    flags.bes_controllable = bes_ctrl[i];
    flags.bev_controllable = bev_ctrl[i];
    auto sizing_rng = RngStream::derive(seed, "sizing/" + h.id);
    auto config = size_components(h.id, sd, h.envelope, flags, sizing_rng);
    auto profile_rng = RngStream::derive(seed, "profiles/" + h.id);
    h.config = assign_profiles(std::move(config), pool, h.envelope.annual_electric_demand_kwh, profile_rng);

    q.lines.push_back({"svc/" + h.id, EndpointKind::household, h.id, h.node_ref, kServiceLineROhmPerKm,
                       kServiceLineXOhmPerKm, kServiceLineLengthKm, kServiceLineIMaxA});
    if (heat[i] == HeatMode::dhn) {
      const double nhl = nominal_heat_load(h.envelope, sd.t_ref_ambient_c);
      household_nhl[h.id] = nhl;
      dhn_cells[grid.find_bus(h.node_ref)->cell_id].nhl_by_node[h.node_ref] += nhl;
    }
    q.households.push_back(std::move(h));
  }

  // profiles actually referenced
  std::set<std::string> used_load, used_driving;
  for (const auto& h : q.households) {
    used_load.insert(h.config.load_profile_ref);
    for (const auto& b : h.config.bevs) used_driving.insert(b.driving_profile_ref);
  }
  for (const auto& p : pool.load) {
    if (!used_load.count(p.id)) continue;
    q.profiles.push_back({p.id, ProfileKind::load, "profiles/" + p.id + ".csv"});
    q.profile_data.load.push_back(p);
  }
  for (const auto& p : pool.driving) {
    if (!used_driving.count(p.id)) continue;
    q.profiles.push_back({p.id, ProfileKind::driving, "profiles/" + p.id + ".csv"});
    q.profile_data.driving.push_back(p);
  }

  // DHN: one tree per cell, plant at the cell's transformer LV node
  DhnDesign design;
  design.t_supply_c = sd.dhn.t_supply_c;
  design.t_return_c = sd.dhn.t_return_c;
  design.v_max_m_s = sd.dhn.v_max_m_s;
  design.routing_factor = sd.dhn.routing_factor;
  design.rho_water = q.settings.rho_water;
  design.cp_water = q.settings.cp_water;
  for (const auto& [cell, demand] : dhn_cells) {
    std::string source;
    for (const auto& t : grid.transformers) {
      const auto* lv = grid.find_bus(t.lv_bus);
      if (lv && lv->cell_id == cell && (source.empty() || t.lv_bus < source)) source = t.lv_bus;
    }
    // cells without a transformer place the plant at their first consumer node
    if (source.empty()) source = demand.nhl_by_node.begin()->first;

    std::set<std::string> members{source};
    for (const auto& [node, nhl] : demand.nhl_by_node) members.insert(node);
    if (sd.dhn.topology_mode == DhnTopologyMode::mirror_electric) members = steiner_nodes(grid, cell, source, demand.nhl_by_node);

    std::vector<DhnVertex> vertices;
    std::map<std::string, std::size_t> index;
    for (const auto& node : members) {
      index[node] = vertices.size();
      auto it = demand.nhl_by_node.find(node);
      vertices.push_back({node, grid.find_bus(node)->coord, it == demand.nhl_by_node.end() ? 0.0 : it->second, node == source});
    }
    std::vector<DhnEdge> electric;
    if (sd.dhn.topology_mode == DhnTopologyMode::mirror_electric) {
      for (const auto& l : grid.lines) {
        auto a = index.find(l.from_bus);
        auto b = index.find(l.to_bus);
        if (a == index.end() || b == index.end()) continue;
        electric.push_back({a->second, b->second, distance(vertices[a->second].coord, vertices[b->second].coord)});
      }
    }
    const auto tree = build_topology(vertices, sd.dhn.topology_mode, electric);
    const auto net = size_pipes(tree, vertices, design, options.dn_catalog);
    for (const auto& v : net.vertices) q.dhn_vertices.push_back({v.node_ref, v.nhl_w, v.is_source});
    for (const auto& p : net.pipes) {
      q.pipes.push_back({p.id, EndpointKind::node, net.vertices[p.upstream].node_ref, net.vertices[p.downstream].node_ref,
                         p.length_m, p.nominal_mass_flow_kg_s, p.inner_diameter_m, p.dn_label});
    }
  }
  for (const auto& h : q.households) {
    auto it = household_nhl.find(h.id);
    if (it == household_nhl.end()) continue;
    const double mdot = vertex_mass_flow(it->second, design.t_supply_c, design.t_return_c, design.cp_water);
    const auto id = "svc/" + h.id;
    const auto& dn = options.dn_catalog.select(mdot, design.rho_water, design.v_max_m_s, id);
    q.pipes.push_back({id, EndpointKind::household, h.id, h.node_ref, sd.dhn.service_pipe_length_m, mdot,
                       dn.inner_diameter_m, dn.label});
  }

  canonicalize(q);
  return q;
}

}  // namespace quartersim

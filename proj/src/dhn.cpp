#include "quartersim/dhn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <tuple>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

DnCatalog::DnCatalog(std::vector<DnSize> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw ConfigurationError("empty DN catalog");
  std::stable_sort(sizes_.begin(), sizes_.end(),
                   [](const DnSize& a, const DnSize& b) { return a.inner_diameter_m < b.inner_diameter_m; });
}

DnCatalog DnCatalog::standard() {
  return DnCatalog({{"DN15", 0.0160},  {"DN20", 0.0216},  {"DN25", 0.0285},  {"DN32", 0.0372},
                    {"DN40", 0.0431},  {"DN50", 0.0545},  {"DN65", 0.0703},  {"DN80", 0.0825},
                    {"DN100", 0.1071}, {"DN125", 0.1325}, {"DN150", 0.1603}, {"DN200", 0.2101}});
}

DnCatalog DnCatalog::load(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto label = table.column("dn_label", path.filename().string());
  const auto diameter = table.column("inner_diameter_mm", path.filename().string());
  std::vector<DnSize> sizes;
  for (const auto& row : table.rows) {
    const double mm = csv::parse_double(row[diameter], "DN catalog " + row[label]);
    if (!(mm > 0.0)) throw ParseError("DN catalog " + row[label], "diameter must be positive");
    sizes.push_back({row[label], mm / 1000.0});
  }
  return DnCatalog(std::move(sizes));
}

double raw_inner_diameter(double mass_flow_kg_s, double rho, double v_max) {
  return std::sqrt(4.0 * mass_flow_kg_s / (rho * std::numbers::pi * v_max));
}

double flow_velocity(double mass_flow_kg_s, double rho, double inner_diameter_m) {
  return mass_flow_kg_s / (rho * std::numbers::pi * inner_diameter_m * inner_diameter_m / 4.0);
}

const DnSize& DnCatalog::select(double mass_flow_kg_s, double rho, double v_max, std::string_view what) const {
  const double d_raw = raw_inner_diameter(mass_flow_kg_s, rho, v_max);
  for (const auto& s : sizes_) {
    if (s.inner_diameter_m >= d_raw) return s;
  }
  throw SizingError("pipe " + std::string(what) + ": flow " + csv::format_double(mass_flow_kg_s) +
                    " kg/s exceeds the largest catalog size " + sizes_.back().label);
}

double vertex_mass_flow(double nhl_w, double t_supply_c, double t_return_c, double cp_water) {
  if (!(t_supply_c > t_return_c)) throw DomainError("supply temperature must exceed return temperature");
  return nhl_w / (cp_water * (t_supply_c - t_return_c));
}

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

}  // namespace

std::vector<DhnEdge> build_topology(std::span<const DhnVertex> vertices, DhnTopologyMode mode,
                                    std::span<const DhnEdge> electric_edges) {
  const auto n = vertices.size();
  std::vector<DhnEdge> tree;
  if (mode == DhnTopologyMode::mst) {
    std::vector<DhnEdge> candidates;
    candidates.reserve(n * (n - (n > 0)) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        candidates.push_back({i, j, distance(vertices[i].coord, vertices[j].coord)});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const DhnEdge& x, const DhnEdge& y) {
      return std::tie(x.weight, x.a, x.b) < std::tie(y.weight, y.a, y.b);
    });
    DisjointSet sets(n);
    for (const auto& e : candidates) {
      if (sets.unite(e.a, e.b)) tree.push_back(e);
      if (tree.size() + 1 == n) break;
    }
    return tree;
  }

  DisjointSet sets(n);
  for (const auto& e : electric_edges) {
    if (e.a >= n || e.b >= n) throw TopologyError("electric edge references an unknown DHN vertex");
    const auto lo = std::min(e.a, e.b);
    const auto hi = std::max(e.a, e.b);
    if (!sets.unite(lo, hi)) throw TopologyError("electric topology not radial");
    tree.push_back({lo, hi, distance(vertices[lo].coord, vertices[hi].coord)});
  }
  std::map<std::size_t, int> sources_per_component;
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices[i].is_source) ++sources_per_component[sets.find(i)];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!sources_per_component.count(sets.find(i))) {
      throw TopologyError("electric topology does not connect DHN vertex " + vertices[i].node_ref + " to a source");
    }
  }
  return tree;
}

DhnNetwork size_pipes(std::span<const DhnEdge> tree, std::vector<DhnVertex> vertices, const DhnDesign& design,
                      const DnCatalog& catalog) {
  const auto n = vertices.size();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& e : tree) {
    if (e.a >= n || e.b >= n) throw TopologyError("edge references an unknown DHN vertex");
    adjacency[e.a].push_back(e.b);
    adjacency[e.b].push_back(e.a);
  }

  DhnNetwork net;
  net.t_supply_c = design.t_supply_c;
  net.t_return_c = design.t_return_c;
  net.v_max_m_s = design.v_max_m_s;
  net.rho_water = design.rho_water;
  net.cp_water = design.cp_water;

  constexpr auto kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, kUnvisited);
  std::vector<std::size_t> order;  // BFS order, parents first
  order.reserve(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (!vertices[root].is_source || parent[root] != kUnvisited) continue;
    parent[root] = root;
    const auto first = order.size();
    order.push_back(root);
    for (auto k = first; k < order.size(); ++k) {
      const auto v = order[k];
      for (auto w : adjacency[v]) {
        if (w == parent[v]) continue;
        if (parent[w] != kUnvisited) throw TopologyError("DHN topology contains a cycle or two sources in one tree");
        parent[w] = v;
        order.push_back(w);
      }
    }
  }
  if (order.size() != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (parent[i] == kUnvisited) throw TopologyError("DHN vertex " + vertices[i].node_ref + " is not reachable from a source");
    }
  }
  if (tree.size() + std::count_if(vertices.begin(), vertices.end(), [](const DhnVertex& v) { return v.is_source; }) != n) {
    throw TopologyError("DHN topology is not a forest rooted at its sources");
  }

  std::vector<double> subtree_flow(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    subtree_flow[i] = vertex_mass_flow(vertices[i].nhl_w, design.t_supply_c, design.t_return_c, design.cp_water);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent[*it] != *it) subtree_flow[parent[*it]] += subtree_flow[*it];
  }

  for (auto v : order) {
    if (parent[v] == v) continue;
    const auto u = parent[v];
    DhnPipe pipe;
    pipe.id = vertices[u].node_ref + "->" + vertices[v].node_ref;
    pipe.upstream = u;
    pipe.downstream = v;
    pipe.length_m = std::max(design.min_length_m, distance(vertices[u].coord, vertices[v].coord) * design.routing_factor);
    pipe.nominal_mass_flow_kg_s = subtree_flow[v];
    const auto& dn = catalog.select(pipe.nominal_mass_flow_kg_s, design.rho_water, design.v_max_m_s, pipe.id);
    pipe.inner_diameter_m = dn.inner_diameter_m;
    pipe.dn_label = dn.label;
    net.pipes.push_back(std::move(pipe));
  }
  std::sort(net.pipes.begin(), net.pipes.end(), [](const DhnPipe& a, const DhnPipe& b) { return a.id < b.id; });
  net.vertices = std::move(vertices);
  return net;
}

DhnFlowState solve_dhn(const DhnNetwork& net, std::span<const double> demand_w) {
  const auto n = net.vertices.size();
  if (demand_w.size() != n) throw DomainError("demand vector size does not match DHN vertex count");
  DhnFlowState state;
  std::vector<double> vertex_flow(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double q = std::max(0.0, demand_w[i]);
    if (q > net.vertices[i].nhl_w) {
      state.warnings.push_back("DHN demand at " + net.vertices[i].node_ref + " clipped to design load");
      q = net.vertices[i].nhl_w;
    }
    vertex_flow[i] = vertex_mass_flow(q, net.t_supply_c, net.t_return_c, net.cp_water);
  }

  // children before parents: aggregate each pipe's downstream subtree
  std::vector<std::vector<std::size_t>> child_pipes(n);
  std::vector<std::size_t> incoming(n, static_cast<std::size_t>(-1));
  for (std::size_t p = 0; p < net.pipes.size(); ++p) {
    child_pipes[net.pipes[p].upstream].push_back(p);
    incoming[net.pipes[p].downstream] = p;
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (incoming[i] == static_cast<std::size_t>(-1)) order.push_back(i);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (auto p : child_pipes[order[k]]) order.push_back(net.pipes[p].downstream);
  }
  std::vector<double> subtree = vertex_flow;
  state.pipe_mass_flow_kg_s.assign(net.pipes.size(), 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto p = incoming[*it];
    if (p == static_cast<std::size_t>(-1)) continue;
    state.pipe_mass_flow_kg_s[p] = subtree[*it];
    subtree[net.pipes[p].upstream] += subtree[*it];
  }
  state.vertex_return_temperature_c.assign(n, net.t_return_c);
  return state;
}

}  // namespace quartersim

#include "quartersim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

namespace fs = std::filesystem;

std::string_view to_string(BusKind kind) { return kind == BusKind::slack ? "slack" : "pq"; }

BusKind parse_bus_kind(std::string_view text) {
  if (text == "slack") return BusKind::slack;
  if (text == "pq") return BusKind::pq;
  throw ParseError("kind", "unknown bus kind '" + std::string(text) + "'");
}

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::LV: return "LV";
    case Layer::MV: return "MV";
    case Layer::HV_boundary: return "HV";
  }
  return "LV";
}

Layer parse_layer(std::string_view text) {
  if (text == "LV") return Layer::LV;
  if (text == "MV") return Layer::MV;
  if (text == "HV") return Layer::HV_boundary;
  throw ParseError("layer", "unknown layer '" + std::string(text) + "'");
}

Layer layer_for_voltage(double vn_kv) {
  if (vn_kv < 1.0) return Layer::LV;
  if (vn_kv <= 60.0) return Layer::MV;
  return Layer::HV_boundary;
}

double distance(const Coord& a, const Coord& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const Bus* GridTopology::find_bus(std::string_view id) const {
  for (const auto& b : buses) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

namespace {

csv::Table read_required(const fs::path& dir, const char* name) {
  const auto path = dir / name;
  if (!fs::exists(path)) throw ImportError("missing SimBench file: " + std::string(name));
  return csv::read_file(path);
}

std::optional<csv::Table> read_optional(const fs::path& dir, const char* name) {
  const auto path = dir / name;
  if (!fs::exists(path)) return std::nullopt;
  return csv::read_file(path);
}

}  // namespace

GridTopology import_simbench(const fs::path& dir) {
  GridTopology grid;
  std::vector<std::string> dangling;

  const auto nodes = read_required(dir, "Node.csv");
  const auto c_id = nodes.column("id", "Node.csv");
  const auto c_vmr = nodes.column("vmR", "Node.csv");
  const auto c_coord = nodes.find_column("coordID");
  const auto c_subnet = nodes.find_column("subnet");

  std::map<std::string, Coord> coords;
  bool coords_needed = false;
  if (c_coord) {
    for (const auto& row : nodes.rows) coords_needed = coords_needed || !row[*c_coord].empty();
  }
  if (coords_needed) {
    const auto table = read_required(dir, "Coordinates.csv");
    const auto id = table.column("id", "Coordinates.csv");
    const auto x = table.column("x", "Coordinates.csv");
    const auto y = table.column("y", "Coordinates.csv");
    for (const auto& row : table.rows) {
      coords[row[id]] = Coord{csv::parse_double(row[x], "Coordinates.csv x"),
                              csv::parse_double(row[y], "Coordinates.csv y")};
    }
  }

  std::set<std::string> slack_nodes;
  if (auto ext = read_optional(dir, "ExternalNet.csv")) {
    const auto node = ext->column("node", "ExternalNet.csv");
    for (const auto& row : ext->rows) slack_nodes.insert(row[node]);
  }

  std::set<std::string> node_ids;
  for (const auto& row : nodes.rows) {
    Bus bus;
    bus.id = row[c_id];
    bus.vn_kv = csv::parse_double(row[c_vmr], "Node.csv vmR of " + bus.id);
    bus.layer = layer_for_voltage(bus.vn_kv);
    bus.kind = slack_nodes.count(bus.id) ? BusKind::slack : BusKind::pq;
    if (c_coord && !row[*c_coord].empty()) {
      auto it = coords.find(row[*c_coord]);
      if (it == coords.end()) dangling.push_back("Node " + bus.id + " -> coordID " + row[*c_coord]);
      else bus.coord = it->second;
    }
    bus.cell_id = (c_subnet && !row[*c_subnet].empty()) ? row[*c_subnet] : std::string(to_string(bus.layer));
    node_ids.insert(bus.id);
    grid.buses.push_back(std::move(bus));
  }
  for (const auto& s : slack_nodes) {
    if (!node_ids.count(s)) dangling.push_back("ExternalNet -> node " + s);
  }

  if (auto lines = read_optional(dir, "Line.csv")) {
    const auto types = read_required(dir, "LineType.csv");
    struct LineType { double r, x, i_max_ka; };
    std::map<std::string, LineType> type_map;
    {
      const auto id = types.column("id", "LineType.csv");
      const auto r = types.column("r", "LineType.csv");
      const auto x = types.column("x", "LineType.csv");
      const auto imax = types.column("iMax", "LineType.csv");
      for (const auto& row : types.rows) {
        type_map[row[id]] = LineType{csv::parse_double(row[r], "LineType.csv r"),
                                     csv::parse_double(row[x], "LineType.csv x"),
                                     csv::parse_double(row[imax], "LineType.csv iMax")};
      }
    }
    const auto id = lines->column("id", "Line.csv");
    const auto a = lines->column("nodeA", "Line.csv");
    const auto b = lines->column("nodeB", "Line.csv");
    const auto type = lines->column("type", "Line.csv");
    const auto length = lines->column("length", "Line.csv");
    for (const auto& row : lines->rows) {
      LineSegment line;
      line.id = row[id];
      line.from_bus = row[a];
      line.to_bus = row[b];
      line.length_km = csv::parse_double(row[length], "Line.csv length of " + line.id);
      if (!node_ids.count(line.from_bus)) dangling.push_back("Line " + line.id + " -> node " + line.from_bus);
      if (!node_ids.count(line.to_bus)) dangling.push_back("Line " + line.id + " -> node " + line.to_bus);
      auto it = type_map.find(row[type]);
      if (it == type_map.end()) {
        dangling.push_back("Line " + line.id + " -> type " + row[type]);
      } else {
        line.r_ohm_per_km = it->second.r;
        line.x_ohm_per_km = it->second.x;
        line.i_max_a = it->second.i_max_ka * 1000.0;
      }
      grid.lines.push_back(std::move(line));
    }
  }

  if (auto trafos = read_optional(dir, "Transformer.csv")) {
    const auto types = read_required(dir, "TransformerType.csv");
    struct TrafoType { double s_r, vk, pcu; };
    std::map<std::string, TrafoType> type_map;
    {
      const auto id = types.column("id", "TransformerType.csv");
      const auto sr = types.column("sR", "TransformerType.csv");
      const auto vk = types.column("vmImp", "TransformerType.csv");
      const auto pcu = types.column("pCu", "TransformerType.csv");
      for (const auto& row : types.rows) {
        type_map[row[id]] = TrafoType{csv::parse_double(row[sr], "TransformerType.csv sR"),
                                      csv::parse_double(row[vk], "TransformerType.csv vmImp"),
                                      csv::parse_double(row[pcu], "TransformerType.csv pCu")};
      }
    }
    const auto id = trafos->column("id", "Transformer.csv");
    const auto hv = trafos->column("nodeHV", "Transformer.csv");
    const auto lv = trafos->column("nodeLV", "Transformer.csv");
    const auto type = trafos->column("type", "Transformer.csv");
    for (const auto& row : trafos->rows) {
      Transformer t;
      t.id = row[id];
      t.hv_bus = row[hv];
      t.lv_bus = row[lv];
      if (!node_ids.count(t.hv_bus)) dangling.push_back("Transformer " + t.id + " -> node " + t.hv_bus);
      if (!node_ids.count(t.lv_bus)) dangling.push_back("Transformer " + t.id + " -> node " + t.lv_bus);
      auto it = type_map.find(row[type]);
      if (it == type_map.end()) {
        dangling.push_back("Transformer " + t.id + " -> type " + row[type]);
      } else {
        t.s_rated_mva = it->second.s_r;
        t.vk_percent = it->second.vk;
        // copper losses (kW) at rated power give the resistive share of vk
        t.vkr_percent = it->second.pcu / (it->second.s_r * 10.0);
      }
      grid.transformers.push_back(std::move(t));
    }
  }

  if (auto loads = read_optional(dir, "Load.csv")) {
    const auto id = loads->column("id", "Load.csv");
    const auto node = loads->column("node", "Load.csv");
    for (const auto& row : loads->rows) {
      if (!node_ids.count(row[node])) dangling.push_back("Load " + row[id] + " -> node " + row[node]);
      grid.load_anchors.push_back(LoadAnchor{row[id], row[node]});
    }
  }

  if (!dangling.empty()) {
    std::string msg = "dangling references in " + dir.string() + ":";
    for (const auto& d : dangling) msg += "\n  " + d;
    throw IntegrityError(msg);
  }
  return grid;
}

void export_simbench(const GridTopology& grid, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  csv::Table nodes{{"id", "type", "vmR", "coordID", "subnet", "voltLvl"}, {}};
  csv::Table coords{{"id", "x", "y"}, {}};
  csv::Table ext{{"id", "node", "calc_type"}, {}};
  for (const auto& b : grid.buses) {
    const std::string coord_id = "coord_" + b.id;
    nodes.rows.push_back({b.id, "busbar", csv::format_double(b.vn_kv), coord_id, b.cell_id,
                          std::string(to_string(b.layer))});
    coords.rows.push_back({coord_id, csv::format_double(b.coord.x), csv::format_double(b.coord.y)});
    if (b.kind == BusKind::slack) ext.rows.push_back({"extnet_" + b.id, b.id, "vavm"});
  }
  csv::write_file(dir / "Node.csv", nodes);
  csv::write_file(dir / "Coordinates.csv", coords);
  if (!ext.rows.empty()) csv::write_file(dir / "ExternalNet.csv", ext);

  if (!grid.lines.empty()) {
    csv::Table lines{{"id", "nodeA", "nodeB", "type", "length"}, {}};
    csv::Table types{{"id", "r", "x", "b", "iMax", "type"}, {}};
    for (const auto& l : grid.lines) {
      const std::string type_id = "type_" + l.id;
      lines.rows.push_back({l.id, l.from_bus, l.to_bus, type_id, csv::format_double(l.length_km)});
      types.rows.push_back({type_id, csv::format_double(l.r_ohm_per_km), csv::format_double(l.x_ohm_per_km), "0",
                            csv::format_double(l.i_max_a / 1000.0), "cs"});
    }
    csv::write_file(dir / "Line.csv", lines);
    csv::write_file(dir / "LineType.csv", types);
  }
  if (!grid.transformers.empty()) {
    csv::Table trafos{{"id", "nodeHV", "nodeLV", "type"}, {}};
    csv::Table types{{"id", "sR", "vmImp", "pCu"}, {}};
    for (const auto& t : grid.transformers) {
      const std::string type_id = "type_" + t.id;
      trafos.rows.push_back({t.id, t.hv_bus, t.lv_bus, type_id});
      types.rows.push_back({type_id, csv::format_double(t.s_rated_mva), csv::format_double(t.vk_percent),
                            csv::format_double(t.vkr_percent * t.s_rated_mva * 10.0)});
    }
    csv::write_file(dir / "Transformer.csv", trafos);
    csv::write_file(dir / "TransformerType.csv", types);
  }
  if (!grid.load_anchors.empty()) {
    csv::Table loads{{"id", "node"}, {}};
    for (const auto& a : grid.load_anchors) loads.rows.push_back({a.id, a.bus});
    csv::write_file(dir / "Load.csv", loads);
  }
}

bool TopologyReport::empty() const {
  return disconnected_buses.empty() && slack_findings.empty() && duplicate_ids.empty() &&
         dangling_references.empty() && invalid_elements.empty();
}

std::vector<std::string> TopologyReport::messages() const {
  std::vector<std::string> out;
  for (const auto& b : disconnected_buses) out.push_back("disconnected bus: " + b);
  for (const auto& s : slack_findings) out.push_back(s);
  for (const auto& d : duplicate_ids) out.push_back("duplicate id: " + d);
  for (const auto& d : dangling_references) out.push_back("dangling reference: " + d);
  for (const auto& e : invalid_elements) out.push_back("invalid element: " + e);
  return out;
}

TopologyReport validate_topology(const GridTopology& grid) {
  TopologyReport report;

  auto find_duplicates = [&report](const auto& items, const char* kind) {
    std::map<std::string, int> seen;
    for (const auto& item : items) ++seen[item.id];
    for (const auto& [id, count] : seen) {
      if (count > 1) report.duplicate_ids.push_back(std::string(kind) + " " + id);
    }
  };
  find_duplicates(grid.buses, "bus");
  find_duplicates(grid.lines, "line");
  find_duplicates(grid.transformers, "transformer");
  find_duplicates(grid.load_anchors, "load");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < grid.buses.size(); ++i) index.emplace(grid.buses[i].id, i);

  std::vector<std::size_t> slacks;
  for (std::size_t i = 0; i < grid.buses.size(); ++i) {
    const auto& b = grid.buses[i];
    if (b.kind == BusKind::slack) slacks.push_back(i);
    if (!(b.vn_kv > 0.0)) report.invalid_elements.push_back("bus " + b.id + ": vn_kv must be positive");
  }
  if (slacks.empty()) {
    report.slack_findings.emplace_back("missing slack bus");
  } else if (slacks.size() > 1) {
    std::string msg = "duplicate slack buses:";
    for (auto s : slacks) msg += " " + grid.buses[s].id;
    report.slack_findings.push_back(msg);
  }

  // union-find over closed branches
  std::vector<std::size_t> parent(grid.buses.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](const std::string& a, const std::string& b, const std::string& what) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end()) report.dangling_references.push_back(what + " -> " + a);
    if (ib == index.end()) report.dangling_references.push_back(what + " -> " + b);
    if (ia != index.end() && ib != index.end()) parent[find(ia->second)] = find(ib->second);
  };
  for (const auto& l : grid.lines) {
    unite(l.from_bus, l.to_bus, "line " + l.id);
    if (l.from_bus == l.to_bus) report.invalid_elements.push_back("line " + l.id + ": endpoints must differ");
    if (!(l.length_km > 0.0)) report.invalid_elements.push_back("line " + l.id + ": length must be positive");
    if (!(l.i_max_a > 0.0)) report.invalid_elements.push_back("line " + l.id + ": i_max must be positive");
  }
  for (const auto& t : grid.transformers) {
    unite(t.hv_bus, t.lv_bus, "transformer " + t.id);
    if (!(t.s_rated_mva > 0.0)) report.invalid_elements.push_back("transformer " + t.id + ": s_rated must be positive");
    if (!(t.vkr_percent >= 0.0 && t.vkr_percent <= t.vk_percent)) {
      report.invalid_elements.push_back("transformer " + t.id + ": requires 0 <= vkr <= vk");
    }
  }
  for (const auto& a : grid.load_anchors) {
    if (!index.count(a.bus)) report.dangling_references.push_back("load " + a.id + " -> " + a.bus);
  }

  if (!grid.buses.empty()) {
    std::size_t reference;
    if (!slacks.empty()) {
      reference = find(slacks.front());
    } else {
      std::map<std::size_t, std::size_t> sizes;
      for (std::size_t i = 0; i < grid.buses.size(); ++i) ++sizes[find(i)];
      reference = find(0);
      for (std::size_t i = 0; i < grid.buses.size(); ++i) {
        if (sizes[find(i)] > sizes[reference]) reference = find(i);
      }
    }
    for (std::size_t i = 0; i < grid.buses.size(); ++i) {
      if (find(i) != reference) report.disconnected_buses.push_back(grid.buses[i].id);
    }
  }
  return report;
}

std::size_t AdmittanceMatrix::index_of(std::string_view bus_id) const {
  for (std::size_t i = 0; i < bus_ids.size(); ++i) {
    if (bus_ids[i] == bus_id) return i;
  }
  throw TopologyError("unknown bus '" + std::string(bus_id) + "'");
}

std::complex<double> transformer_impedance_own_pu(const Transformer& t) {
  const double z = t.vk_percent / 100.0;
  const double r = t.vkr_percent / 100.0;
  return {r, std::sqrt(std::max(0.0, z * z - r * r))};
}

std::vector<Branch> build_branches(const GridTopology& grid, double base_mva) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < grid.buses.size(); ++i) index.emplace(grid.buses[i].id, i);
  auto lookup = [&index](const std::string& id, const std::string& owner) {
    auto it = index.find(id);
    if (it == index.end()) throw TopologyError(owner + " references unknown bus '" + id + "'");
    return it->second;
  };

  std::vector<Branch> branches;
  branches.reserve(grid.lines.size() + grid.transformers.size());
  for (const auto& l : grid.lines) {
    Branch br;
    br.id = l.id;
    br.kind = BranchKind::line;
    br.from = lookup(l.from_bus, "line " + l.id);
    br.to = lookup(l.to_bus, "line " + l.id);
    const double vn = grid.buses[br.from].vn_kv;
    const std::complex<double> z_ohm{l.r_ohm_per_km * l.length_km, l.x_ohm_per_km * l.length_km};
    const auto z_pu = z_ohm / impedance_base_ohm(vn, base_mva);
    if (std::abs(z_pu) == 0.0) throw SingularityError("zero-impedance branch: line " + l.id);
    br.y_series = 1.0 / z_pu;
    br.i_base_a = current_base_a(vn, base_mva);
    branches.push_back(std::move(br));
  }
  for (const auto& t : grid.transformers) {
    Branch br;
    br.id = t.id;
    br.kind = BranchKind::transformer;
    br.from = lookup(t.hv_bus, "transformer " + t.id);
    br.to = lookup(t.lv_bus, "transformer " + t.id);
    if (!(t.s_rated_mva > 0.0)) throw SingularityError("transformer " + t.id + " has no rating");
    const auto z_pu = rebase_impedance(transformer_impedance_own_pu(t), t.s_rated_mva, base_mva);
    if (std::abs(z_pu) == 0.0) throw SingularityError("zero-impedance branch: transformer " + t.id);
    br.y_series = 1.0 / z_pu;
    br.i_base_a = current_base_a(grid.buses[br.from].vn_kv, base_mva);
    branches.push_back(std::move(br));
  }
  return branches;
}

AdmittanceMatrix assemble_admittance(std::vector<std::string> bus_ids, const std::vector<Branch>& branches,
                                     double base_mva) {
  const auto n = static_cast<Eigen::Index>(bus_ids.size());
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  triplets.reserve(branches.size() * 4);
  for (const auto& br : branches) {
    const auto f = static_cast<Eigen::Index>(br.from);
    const auto t = static_cast<Eigen::Index>(br.to);
    triplets.emplace_back(f, f, br.y_series);
    triplets.emplace_back(t, t, br.y_series);
    triplets.emplace_back(f, t, -br.y_series);
    triplets.emplace_back(t, f, -br.y_series);
  }
  AdmittanceMatrix y;
  y.bus_ids = std::move(bus_ids);
  y.base_mva = base_mva;
  y.y.resize(n, n);
  y.y.setFromTriplets(triplets.begin(), triplets.end());
  y.y.makeCompressed();
  return y;
}

AdmittanceMatrix build_admittance(const GridTopology& grid, double base_mva) {
  if (!(base_mva > 0.0)) throw DomainError("base_mva must be positive");
  std::vector<std::string> ids;
  ids.reserve(grid.buses.size());
  for (const auto& b : grid.buses) ids.push_back(b.id);
  return assemble_admittance(std::move(ids), build_branches(grid, base_mva), base_mva);
}

}  // namespace quartersim

#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

namespace quartersim {

enum class BusKind { slack, pq };
enum class Layer { LV, MV, HV_boundary };

std::string_view to_string(BusKind kind);
BusKind parse_bus_kind(std::string_view text);
std::string_view to_string(Layer layer);
Layer parse_layer(std::string_view text);
/// LV below 1 kV, MV up to 60 kV, anything above is the HV boundary.
Layer layer_for_voltage(double vn_kv);

struct Coord {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Coord&) const = default;
};

double distance(const Coord& a, const Coord& b);

struct Bus {
  std::string id;
  double vn_kv = 0.0;
  BusKind kind = BusKind::pq;
  Coord coord;
  std::string cell_id;
  Layer layer = Layer::LV;
  bool operator==(const Bus&) const = default;
};

struct LineSegment {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double r_ohm_per_km = 0.0;
  double x_ohm_per_km = 0.0;
  double length_km = 0.0;
  double i_max_a = 0.0;
  bool operator==(const LineSegment&) const = default;
};

struct Transformer {
  std::string id;
  std::string hv_bus;
  std::string lv_bus;
  double s_rated_mva = 0.0;
  double vk_percent = 0.0;
  double vkr_percent = 0.0;
  bool operator==(const Transformer&) const = default;
};

/// One SimBench load record; each spawns exactly one household.
struct LoadAnchor {
  std::string id;
  std::string bus;
  bool operator==(const LoadAnchor&) const = default;
};

struct GridTopology {
  std::vector<Bus> buses;
  std::vector<LineSegment> lines;
  std::vector<Transformer> transformers;
  std::vector<LoadAnchor> load_anchors;
  bool operator==(const GridTopology&) const = default;

  const Bus* find_bus(std::string_view id) const;
};

/// Reads Node.csv (required) plus Line/LineType, Transformer/TransformerType, Load,
/// Coordinates and ExternalNet when present. Referenced type files are mandatory.
GridTopology import_simbench(const std::filesystem::path& dir);
/// Writes the same dialect; one line/transformer type per element.
void export_simbench(const GridTopology& grid, const std::filesystem::path& dir);

struct TopologyReport {
  std::vector<std::string> disconnected_buses;
  std::vector<std::string> slack_findings;
  std::vector<std::string> duplicate_ids;
  std::vector<std::string> dangling_references;
  std::vector<std::string> invalid_elements;

  bool empty() const;
  std::vector<std::string> messages() const;
};

TopologyReport validate_topology(const GridTopology& grid);

enum class BranchKind { line, transformer };

/// Series branch in per-unit on the system base.
struct Branch {
  std::string id;
  BranchKind kind = BranchKind::line;
  std::size_t from = 0;  // hv side for transformers
  std::size_t to = 0;
  std::complex<double> y_series;
  /// Base current at the from-bus voltage, amperes.
  double i_base_a = 0.0;
};

struct AdmittanceMatrix {
  std::vector<std::string> bus_ids;
  Eigen::SparseMatrix<std::complex<double>> y;
  double base_mva = 1.0;

  std::size_t n() const { return bus_ids.size(); }
  std::size_t index_of(std::string_view bus_id) const;
};

/// Impedance base in ohms for a voltage level and power base.
inline double impedance_base_ohm(double vn_kv, double base_mva) { return vn_kv * vn_kv / base_mva; }
inline double current_base_a(double vn_kv, double base_mva) {
  return base_mva * 1e6 / (1.7320508075688772 * vn_kv * 1e3);
}
/// Re-expresses a per-unit impedance from one power base to another (same voltage base).
inline std::complex<double> rebase_impedance(std::complex<double> z_pu, double from_mva, double to_mva) {
  return z_pu * (to_mva / from_mva);
}

/// Series impedance of a transformer in per-unit on its own rating.
std::complex<double> transformer_impedance_own_pu(const Transformer& t);

/// Per-unit branch models; throws SingularityError for a zero-impedance branch.
std::vector<Branch> build_branches(const GridTopology& grid, double base_mva);
AdmittanceMatrix build_admittance(const GridTopology& grid, double base_mva = 1.0);
AdmittanceMatrix assemble_admittance(std::vector<std::string> bus_ids, const std::vector<Branch>& branches,
                                     double base_mva);

}  // namespace quartersim

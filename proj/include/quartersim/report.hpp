#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "quartersim/grid.hpp"
#include "quartersim/results.hpp"

namespace quartersim {

struct Loadings {
  SeriesTable line_pct;
  SeriesTable trafo_pct;
};

/// Line loading |I| / i_max * 100 and transformer loading S / s_rated * 100 from stored currents and powers.
Loadings compute_loadings(const ResultSet& r, const GridTopology& g);

enum class CongestionKind { undervoltage, overvoltage, line_overload, transformer_overload };
std::string_view to_string(CongestionKind kind);

struct CongestionEvent {
  CongestionKind kind = CongestionKind::undervoltage;
  std::string element_id;
  Timestamp start;
  double duration_s = 0.0;
  /// Most severe value over the event and the limit it violates.
  double peak = 0.0;
  double limit = 0.0;
  bool operator==(const CongestionEvent&) const = default;
};

struct CongestionLimits {
  double v_min_pu = 0.9;
  double v_max_pu = 1.1;
  double loading_max_pct = 100.0;
};

/// Contiguous violating steps of one element and kind merge into one event.
std::vector<CongestionEvent> detect_congestion(const Loadings& loadings, const SeriesTable& voltages,
                                               const std::vector<Timestamp>& time, double dt_s,
                                               const CongestionLimits& limits = {});

/// Accepts "csv" and "svg" (comma-separated); FormatError for anything else or an empty list.
std::set<std::string> parse_formats(std::string_view text);

/// CSV: voltages, line_loading, trafo_loading (one row per step) plus congestion_events.
/// SVG: one line chart per metric family.
std::vector<std::filesystem::path> render_outputs(const ResultSet& r, const Loadings& loadings,
                                                  const std::vector<CongestionEvent>& events,
                                                  const std::set<std::string>& formats,
                                                  const std::filesystem::path& out_dir);

/// Standalone SVG line chart over a 1200 x 400 view box.
std::string render_svg_chart(const std::string& title, const std::string& unit, const std::vector<Timestamp>& time,
                             const SeriesTable& series);

}  // namespace quartersim

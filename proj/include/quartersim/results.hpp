#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "quartersim/timeutil.hpp"

namespace quartersim {

/// One metric family: a value per (time step, element).
struct SeriesTable {
  std::vector<std::string> ids;
  /// rows[step][element]
  std::vector<std::vector<double>> rows;
  bool operator==(const SeriesTable&) const = default;

  std::size_t column(std::string_view id) const;
};

namespace family {
inline constexpr const char* kBusVm = "bus_vm_pu";
inline constexpr const char* kBusVa = "bus_va_rad";
inline constexpr const char* kLineCurrent = "line_current_a";
inline constexpr const char* kLineLoading = "line_loading_pct";
inline constexpr const char* kTrafoS = "trafo_s_mva";
inline constexpr const char* kTrafoP = "trafo_p_hv_mw";
inline constexpr const char* kTrafoLoading = "trafo_loading_pct";
inline constexpr const char* kHouseholdP = "household_p_w";
inline constexpr const char* kHouseholdQ = "household_q_var";
inline constexpr const char* kHouseholdPMeasured = "household_p_measured_w";
inline constexpr const char* kHouseholdQMeasured = "household_q_measured_var";
inline constexpr const char* kPipeFlow = "pipe_mass_flow_kg_s";
inline constexpr const char* kBesSoc = "bes_soc";
inline constexpr const char* kBevSoc = "bev_soc";
inline constexpr const char* kIndoorTemperature = "t_indoor_c";
/// slack_p_mw, slack_q_mvar, losses_mw
inline constexpr const char* kSystem = "system";
}  // namespace family

struct ResultSet {
  std::uint64_t seed = 0;
  double dt_s = 900.0;
  std::vector<Timestamp> time;
  std::map<std::string, SeriesTable> families;
  std::vector<std::string> warnings;
  bool operator==(const ResultSet&) const = default;

  const SeriesTable& at(const std::string& family) const;
};

/// Directory with one "<family>.csv" per family (timestamp column then element ids),
/// plus run.json (seed, dt) and warnings.txt.
void save_results(const ResultSet& r, const std::filesystem::path& dir);
ResultSet load_results(const std::filesystem::path& dir);

}  // namespace quartersim

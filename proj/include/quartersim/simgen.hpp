#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "quartersim/devices.hpp"
#include "quartersim/dhn.hpp"
#include "quartersim/grid.hpp"
#include "quartersim/quarter.hpp"
#include "quartersim/weather.hpp"

namespace quartersim {

/// Bus id given to a household's own connection point in the simulation grid.
std::string household_bus_id(std::string_view household_id);

/// Electric network as simulated: quarter nodes plus one bus per household, joined by its service line.
GridTopology simulation_grid(const QuarterModel& q);

enum class DeviceKind { bes, bev };

/// Per-step external target for one controllable device.
struct SetpointChannel {
  std::string device_id;  // "bes/<household>" or "bev/<household>/<k>"
  std::string household_id;
  DeviceKind kind = DeviceKind::bes;
  std::size_t bev_index = 0;
};

struct DeviceState {
  double bes_soc = 0.0;  // meaningful only with a BES
  std::vector<double> bev_soc;
  ThermalState thermal;
  bool operator==(const DeviceState&) const = default;
};

struct ProsumerInstance {
  std::string household_id;
  ProsumerConfig config;
  ThermalEnvelope envelope;
  std::size_t bus = 0;
  /// DHN vertex serving this household when heat_mode is DHN.
  std::optional<std::size_t> dhn_vertex;
  DeviceState initial;
  LoadProfile load;
  std::vector<DrivingProfile> driving;  // one per BEV
};

struct SimulationModel {
  std::string name;
  std::uint64_t seed = 0;
  GridTopology grid;
  AdmittanceMatrix admittance;
  std::vector<Branch> branches;
  std::size_t slack = 0;
  std::vector<ProsumerInstance> prosumers;
  std::optional<DhnNetwork> dhn;
  WeatherSeries weather;
  std::vector<SetpointChannel> setpoint_channels;
  double base_mva = 1.0;
};

/// Binds every household to its bus, resolves profile data and sets initial device states
/// (BES at the middle of its SoC window, BEVs at 0.8, indoor air at the set temperature).
SimulationModel assemble_simulation(const QuarterModel& q, const WeatherSeries& weather);

/// Flat-package textual model of the quarter (equation-based, Modelica 3 syntax).
std::string emit_model_text(const QuarterModel& q);
/// Writes emit_model_text into `out_dir`; returns the written files.
std::vector<std::filesystem::path> emit_dynamic_model_text(const QuarterModel& q, const std::filesystem::path& out_dir);

}  // namespace quartersim

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quartersim/error.hpp"
#include "quartersim/powerflow.hpp"
#include "quartersim/results.hpp"
#include "quartersim/simgen.hpp"

namespace quartersim {

/// Delivers external target powers (kW, charging positive) to controllable devices each step.
class SetpointSource {
 public:
  virtual ~SetpointSource() = default;
  virtual std::optional<double> target_kw(Timestamp t, const std::string& device_id) = 0;
};

/// Replays "timestamp;device_id;target_kw" rows; a target holds until the next row for that device.
class ReplaySetpoints final : public SetpointSource {
 public:
  static ReplaySetpoints load(const std::filesystem::path& path);
  void add(Timestamp t, std::string device_id, double target_kw);
  std::optional<double> target_kw(Timestamp t, const std::string& device_id) override;

 private:
  std::map<std::string, std::map<Timestamp, double>> targets_;
};

/// Raised when a step cannot be solved; carries the step index and the device states before it.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t step, std::vector<DeviceState> snapshot)
      : Error(what), step_(step), snapshot_(std::move(snapshot)) {}
  std::size_t step() const { return step_; }
  const std::vector<DeviceState>& snapshot() const { return snapshot_; }

 private:
  std::size_t step_;
  std::vector<DeviceState> snapshot_;
};

struct SimulationOptions {
  PowerFlowOptions power_flow;
};

/// Steps of `dt_s` over [start, start + duration_h). Load and driving profiles are read as
/// typical-year series: timestamps outside their year map to the same offset within it.
ResultSet run_simulation(const SimulationModel& m, Timestamp start, double duration_h, double dt_s,
                         SetpointSource* setpoints = nullptr, const SimulationOptions& options = {});

}  // namespace quartersim

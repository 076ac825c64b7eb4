#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "quartersim/rng.hpp"
#include "quartersim/timeutil.hpp"

namespace quartersim {

enum class ProfileKind { load, driving };

std::string_view to_string(ProfileKind kind);
ProfileKind parse_profile_kind(std::string_view text);

/// Equidistant step-hold series of household power in kW.
struct LoadProfile {
  std::string id;
  Timestamp start;
  std::int64_t step_s = 3600;
  std::vector<double> kw;
  bool operator==(const LoadProfile&) const = default;

  Timestamp end() const { return start + std::chrono::seconds(step_s * static_cast<std::int64_t>(kw.size())); }
  bool covers(Timestamp from, Timestamp to) const { return from >= start && to <= end(); }
  /// Value of the interval containing t; ProfileError outside the covered span.
  double at(Timestamp t) const;
  /// Sum of P * step over the whole series, kWh.
  double energy_kwh() const;
};

struct DrivingSample {
  bool plugged = true;
  /// Energy drawn from the battery during the sample interval while away, kWh.
  double away_kwh = 0.0;
};

struct DrivingProfile {
  std::string id;
  Timestamp start;
  std::int64_t step_s = 3600;
  std::vector<std::uint8_t> plugged;
  std::vector<double> away_kwh;
  bool operator==(const DrivingProfile&) const = default;

  Timestamp end() const { return start + std::chrono::seconds(step_s * static_cast<std::int64_t>(plugged.size())); }
  bool covers(Timestamp from, Timestamp to) const { return from >= start && to <= end(); }
  /// Sample for a simulation step [t, t + dt): away consumption scaled by dt / step_s.
  DrivingSample at(Timestamp t, double dt_s) const;
};

/// Files: "timestamp;value" (kW) and "timestamp;plugged;away_consumption_kwh".
LoadProfile read_load_profile(const std::filesystem::path& path, std::string id);
void write_load_profile(const std::filesystem::path& path, const LoadProfile& profile);
DrivingProfile read_driving_profile(const std::filesystem::path& path, std::string id);
void write_driving_profile(const std::filesystem::path& path, const DrivingProfile& profile);

/// Hourly two-peak household shape with seeded jitter, normalized to 1000 kWh over the year.
LoadProfile synthetic_load_profile(std::string id, int year, RngStream& rng);
/// Hourly commuter pattern: away on weekdays with seeded departure/return, short weekend trips.
DrivingProfile synthetic_driving_profile(std::string id, int year, RngStream& rng);

struct ProfilePool {
  std::vector<LoadProfile> load;
  std::vector<DrivingProfile> driving;
  bool operator==(const ProfilePool&) const = default;

  const LoadProfile* find_load(std::string_view id) const;
  const DrivingProfile* find_driving(std::string_view id) const;
};

ProfilePool synthetic_pool(int year, int count, std::uint64_t seed);

}  // namespace quartersim

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "quartersim/rng.hpp"
#include "quartersim/timeutil.hpp"

namespace quartersim {

struct WeatherSample {
  double ghi_w_m2 = 0.0;
  double t_ambient_c = 0.0;
};

/// Equidistant weather series, linearly interpolated between samples.
struct WeatherSeries {
  Timestamp start;
  std::int64_t step_s = 3600;
  std::vector<double> ghi_w_m2;
  std::vector<double> t_ambient_c;
  bool operator==(const WeatherSeries&) const = default;

  std::size_t size() const { return ghi_w_m2.size(); }
  /// Last sample time.
  Timestamp last() const;
  bool covers(Timestamp from, Timestamp to) const { return !ghi_w_m2.empty() && from >= start && to <= last(); }
  /// Throws ProfileError outside [start, last()].
  WeatherSample at(Timestamp t) const;
};

/// "timestamp;ghi_w_m2;t_ambient_c"
WeatherSeries read_weather_csv(const std::filesystem::path& path);
void write_weather_csv(const std::filesystem::path& path, const WeatherSeries& weather);

/// Merges DWD hourly station products: air temperature (MESS_DATUM;TT_TU) and solar
/// (MESS_DATUM;FG_LBERG in J/cm^2 per hour). Missing values (-999) are linearly bridged.
WeatherSeries import_dwd(const std::filesystem::path& temperature_file, const std::filesystem::path& solar_file);

/// Clear-sky-shaped spring series for a mid-latitude site: sunrise ~06:30, sunset ~20:15,
/// seeded daily cloudiness and a diurnal temperature swing around ~12 degC with ~20 degC afternoons.
WeatherSeries synthetic_april_weather(Timestamp start, int hours, std::uint64_t seed);

}  // namespace quartersim

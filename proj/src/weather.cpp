#include "quartersim/weather.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

Timestamp WeatherSeries::last() const {
  const auto n = static_cast<std::int64_t>(ghi_w_m2.size());
  return start + std::chrono::seconds(step_s * (n > 0 ? n - 1 : 0));
}

WeatherSample WeatherSeries::at(Timestamp t) const {
  if (ghi_w_m2.empty() || t < start || t > last()) {
    throw ProfileError("weather series does not cover " + format_timestamp(t));
  }
  const auto offset = (t - start).count();
  const auto i = static_cast<std::size_t>(offset / step_s);
  const double frac = static_cast<double>(offset % step_s) / static_cast<double>(step_s);
  if (frac == 0.0 || i + 1 >= size()) return {ghi_w_m2[i], t_ambient_c[i]};
  return {ghi_w_m2[i] + frac * (ghi_w_m2[i + 1] - ghi_w_m2[i]),
          t_ambient_c[i] + frac * (t_ambient_c[i + 1] - t_ambient_c[i])};
}

WeatherSeries read_weather_csv(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  const auto source = path.filename().string();
  const auto c_t = table.column("timestamp", source);
  const auto c_ghi = table.column("ghi_w_m2", source);
  const auto c_temp = table.column("t_ambient_c", source);
  if (table.rows.empty()) throw ProfileError(source + ": empty weather file");
  WeatherSeries w;
  w.start = parse_timestamp(table.rows[0][c_t]);
  w.step_s = table.rows.size() > 1 ? (parse_timestamp(table.rows[1][c_t]) - w.start).count() : 3600;
  if (w.step_s <= 0) throw ProfileError(source + ": timestamps must increase");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (parse_timestamp(row[c_t]) != w.start + std::chrono::seconds(w.step_s * static_cast<std::int64_t>(i))) {
      throw ProfileError(source + ": non-equidistant timestamp at row " + std::to_string(i + 2));
    }
    const double ghi = csv::parse_double(row[c_ghi], source);
    if (ghi < 0.0) throw ProfileError(source + ": negative irradiance at row " + std::to_string(i + 2));
    w.ghi_w_m2.push_back(ghi);
    w.t_ambient_c.push_back(csv::parse_double(row[c_temp], source));
  }
  return w;
}

void write_weather_csv(const std::filesystem::path& path, const WeatherSeries& weather) {
  std::string out = "timestamp;ghi_w_m2;t_ambient_c\n";
  for (std::size_t i = 0; i < weather.size(); ++i) {
    out += format_timestamp(weather.start + std::chrono::seconds(weather.step_s * static_cast<std::int64_t>(i)));
    out += ';';
    out += csv::format_double(weather.ghi_w_m2[i]);
    out += ';';
    out += csv::format_double(weather.t_ambient_c[i]);
    out += '\n';
  }
  csv::write_text(path, out);
}

namespace {

Timestamp parse_dwd_time(std::string_view text, const std::string& source) {
  // YYYYMMDDHH or YYYYMMDDHH:MM
  text = csv::trim(text);
  if (text.size() < 10) throw ParseError(source, "bad MESS_DATUM '" + std::string(text) + "'");
  std::string iso = std::string(text.substr(0, 4)) + "-" + std::string(text.substr(4, 2)) + "-" +
                    std::string(text.substr(6, 2)) + "T" + std::string(text.substr(8, 2)) + ":";
  iso += text.size() >= 13 ? std::string(text.substr(11, 2)) : "00";
  return parse_timestamp(iso);
}

std::map<Timestamp, double> read_dwd_column(const std::filesystem::path& path, const char* column, double scale) {
  const auto table = csv::read_file(path);
  const auto source = path.filename().string();
  const auto c_t = table.column("MESS_DATUM", source);
  const auto c_v = table.column(column, source);
  std::map<Timestamp, double> out;
  for (const auto& row : table.rows) {
    const double v = csv::parse_double(row[c_v], source);
    if (v <= -999.0) continue;
    out[parse_dwd_time(row[c_t], source)] = v * scale;
  }
  return out;
}

std::vector<double> fill_series(const std::map<Timestamp, double>& values, Timestamp start, std::size_t n,
                                const char* what) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = start + std::chrono::hours(i);
    auto hi = values.lower_bound(t);
    if (hi != values.end() && hi->first == t) {
      out[i] = hi->second;
      continue;
    }
    if (hi == values.end() || hi == values.begin()) {
      throw ProfileError(std::string("DWD ") + what + " series has an unbridgeable gap at " + format_timestamp(t));
    }
    auto lo = std::prev(hi);
    const double frac = static_cast<double>((t - lo->first).count()) / static_cast<double>((hi->first - lo->first).count());
    out[i] = lo->second + frac * (hi->second - lo->second);
  }
  return out;
}

}  // namespace

WeatherSeries import_dwd(const std::filesystem::path& temperature_file, const std::filesystem::path& solar_file) {
  const auto temperature = read_dwd_column(temperature_file, "TT_TU", 1.0);
  // J/cm^2 per hour -> W/m^2 mean over the hour
  auto solar = read_dwd_column(solar_file, "FG_LBERG", 1.0e4 / 3600.0);
  // hourly sums are stamped at the end of their interval
  std::map<Timestamp, double> solar_start;
  for (const auto& [t, v] : solar) solar_start[t - std::chrono::hours(1)] = v;
  if (temperature.empty() || solar_start.empty()) throw ProfileError("DWD import: no valid observations");
  const auto start = std::max(temperature.begin()->first, solar_start.begin()->first);
  const auto stop = std::min(temperature.rbegin()->first, solar_start.rbegin()->first);
  if (stop < start) throw ProfileError("DWD import: temperature and solar files do not overlap");
  const auto n = static_cast<std::size_t>((stop - start).count() / 3600 + 1);
  WeatherSeries w;
  w.start = start;
  w.step_s = 3600;
  w.t_ambient_c = fill_series(temperature, start, n, "temperature");
  w.ghi_w_m2 = fill_series(solar_start, start, n, "solar");
  return w;
}

WeatherSeries synthetic_april_weather(Timestamp start, int hours, std::uint64_t seed) {
  auto rng = RngStream::derive(seed, "weather/april");
  WeatherSeries w;
  w.start = start;
  w.step_s = 3600;
  double clearness = 0.8;
  double t_mean = 12.0;
  for (int h = 0; h < hours; ++h) {
    const auto t = start + std::chrono::hours(h);
    const double hour = hour_of_day(t);
    if (h == 0 || hour == 0.0) {
      clearness = rng.uniform(0.55, 0.95);
      t_mean = rng.uniform(10.0, 13.5);
    }
    constexpr double sunrise = 6.5;
    constexpr double sunset = 20.25;
    double ghi = 0.0;
    if (hour > sunrise && hour < sunset) {
      ghi = 850.0 * clearness * std::sin(std::numbers::pi * (hour - sunrise) / (sunset - sunrise));
      ghi *= 1.0 + 0.1 * (rng.uniform() - 0.5);
    }
    // warmest mid-afternoon, coldest before sunrise
    const double t_amb = t_mean + 7.5 * std::sin(2.0 * std::numbers::pi * (hour - 9.0) / 24.0);
    w.ghi_w_m2.push_back(std::max(0.0, ghi));
    w.t_ambient_c.push_back(t_amb);
  }
  return w;
}

}  // namespace quartersim

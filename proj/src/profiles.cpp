#include "quartersim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

std::string_view to_string(ProfileKind kind) { return kind == ProfileKind::load ? "load" : "driving"; }

ProfileKind parse_profile_kind(std::string_view text) {
  if (text == "load") return ProfileKind::load;
  if (text == "driving") return ProfileKind::driving;
  throw ParseError("kind", "unknown profile kind '" + std::string(text) + "'");
}

namespace {

std::size_t interval_index(Timestamp start, std::int64_t step_s, std::size_t count, Timestamp t,
                           std::string_view id) {
  const auto offset = (t - start).count();
  if (offset < 0 || step_s <= 0 || static_cast<std::size_t>(offset / step_s) >= count) {
    throw ProfileError("profile '" + std::string(id) + "' does not cover " + format_timestamp(t));
  }
  return static_cast<std::size_t>(offset / step_s);
}

struct ParsedAxis {
  Timestamp start;
  std::int64_t step_s = 0;
};

ParsedAxis parse_axis(const csv::Table& table, const std::string& source) {
  if (table.rows.empty()) throw ProfileError(source + ": empty profile");
  ParsedAxis axis;
  axis.start = parse_timestamp(table.rows[0][0]);
  if (table.rows.size() == 1) {
    axis.step_s = 3600;
    return axis;
  }
  axis.step_s = (parse_timestamp(table.rows[1][0]) - axis.start).count();
  if (axis.step_s <= 0) throw ProfileError(source + ": timestamps must increase");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto expected = axis.start + std::chrono::seconds(axis.step_s * static_cast<std::int64_t>(i));
    if (parse_timestamp(table.rows[i][0]) != expected) {
      throw ProfileError(source + ": non-equidistant timestamp at row " + std::to_string(i + 2));
    }
  }
  return axis;
}

}  // namespace

double LoadProfile::at(Timestamp t) const { return kw[interval_index(start, step_s, kw.size(), t, id)]; }

double LoadProfile::energy_kwh() const {
  double sum = 0.0;
  for (double v : kw) sum += v;
  return sum * static_cast<double>(step_s) / 3600.0;
}

DrivingSample DrivingProfile::at(Timestamp t, double dt_s) const {
  const auto i = interval_index(start, step_s, plugged.size(), t, id);
  return DrivingSample{plugged[i] != 0, away_kwh[i] * dt_s / static_cast<double>(step_s)};
}

LoadProfile read_load_profile(const std::filesystem::path& path, std::string id) {
  const auto table = csv::read_file(path);
  const auto source = path.filename().string();
  const auto axis = parse_axis(table, source);
  LoadProfile p{std::move(id), axis.start, axis.step_s, {}};
  p.kw.reserve(table.rows.size());
  for (const auto& row : table.rows) p.kw.push_back(csv::parse_double(row.at(1), source));
  return p;
}

void write_load_profile(const std::filesystem::path& path, const LoadProfile& profile) {
  std::string out = "timestamp;value\n";
  for (std::size_t i = 0; i < profile.kw.size(); ++i) {
    out += format_timestamp(profile.start + std::chrono::seconds(profile.step_s * static_cast<std::int64_t>(i)));
    out += ';';
    out += csv::format_double(profile.kw[i]);
    out += '\n';
  }
  csv::write_text(path, out);
}

DrivingProfile read_driving_profile(const std::filesystem::path& path, std::string id) {
  const auto table = csv::read_file(path);
  const auto source = path.filename().string();
  const auto axis = parse_axis(table, source);
  DrivingProfile p{std::move(id), axis.start, axis.step_s, {}, {}};
  for (const auto& row : table.rows) {
    if (row.size() < 3) throw ProfileError(source + ": expected timestamp;plugged;away_consumption_kwh");
    const auto plugged = csv::parse_int(row[1], source);
    if (plugged != 0 && plugged != 1) throw ProfileError(source + ": plugged flag must be 0 or 1");
    p.plugged.push_back(static_cast<std::uint8_t>(plugged));
    p.away_kwh.push_back(csv::parse_double(row[2], source));
  }
  return p;
}

void write_driving_profile(const std::filesystem::path& path, const DrivingProfile& profile) {
  std::string out = "timestamp;plugged;away_consumption_kwh\n";
  for (std::size_t i = 0; i < profile.plugged.size(); ++i) {
    out += format_timestamp(profile.start + std::chrono::seconds(profile.step_s * static_cast<std::int64_t>(i)));
    out += ';';
    out += profile.plugged[i] ? '1' : '0';
    out += ';';
    out += csv::format_double(profile.away_kwh[i]);
    out += '\n';
  }
  csv::write_text(path, out);
}

namespace {

std::size_t hours_in_year(int year) {
  return static_cast<std::size_t>((year_start(year + 1) - year_start(year)).count() / 3600);
}

double gaussian_bump(double hour, double center, double width) {
  const double d = hour - center;
  return std::exp(-0.5 * d * d / (width * width));
}

}  // namespace

LoadProfile synthetic_load_profile(std::string id, int year, RngStream& rng) {
  const auto n = hours_in_year(year);
  const double morning_center = rng.uniform(6.5, 8.0);
  const double evening_center = rng.uniform(18.0, 20.0);
  const double morning_weight = rng.uniform(0.5, 0.9);
  const double evening_weight = rng.uniform(1.0, 1.6);
  LoadProfile p{std::move(id), year_start(year), 3600, std::vector<double>(n)};
  for (std::size_t h = 0; h < n; ++h) {
    const auto t = p.start + std::chrono::hours(h);
    const double hour = hour_of_day(t) + 0.5;
    const bool weekend = weekday_index(t) >= 5;
    // winter demand is higher (lighting, indoor time)
    const double season = 1.0 + 0.2 * std::cos(2.0 * std::numbers::pi * (day_of_year(t) + 10) / 365.0);
    double shape = 0.35 + morning_weight * gaussian_bump(hour, morning_center + (weekend ? 1.5 : 0.0), 1.2) +
                   evening_weight * gaussian_bump(hour, evening_center, 1.8) +
                   (weekend ? 0.3 * gaussian_bump(hour, 13.0, 2.5) : 0.0);
    const double jitter = 1.0 + 0.15 * (rng.uniform() - 0.5) * 2.0;
    p.kw[h] = shape * season * jitter;
  }
  const double scale = 1000.0 / p.energy_kwh();
  for (auto& v : p.kw) v *= scale;
  return p;
}

DrivingProfile synthetic_driving_profile(std::string id, int year, RngStream& rng) {
  const auto n = hours_in_year(year);
  DrivingProfile p{std::move(id), year_start(year), 3600, std::vector<std::uint8_t>(n, 1), std::vector<double>(n, 0.0)};
  const double consumption_kwh_per_km = rng.uniform(0.15, 0.2);
  const int days = static_cast<int>(n / 24);
  for (int d = 0; d < days; ++d) {
    const auto day_start = p.start + std::chrono::hours(24 * d);
    const bool weekend = weekday_index(day_start) >= 5;
    int depart;
    int arrive;
    double km;
    if (!weekend) {
      depart = 6 + static_cast<int>(rng.index(3));   // 6..8
      arrive = 16 + static_cast<int>(rng.index(4));  // 16..19
      km = rng.uniform(30.0, 70.0);
    } else {
      if (rng.uniform() < 0.5) continue;
      depart = 10 + static_cast<int>(rng.index(3));
      arrive = depart + 2 + static_cast<int>(rng.index(4));
      km = rng.uniform(10.0, 50.0);
    }
    const double per_hour = km * consumption_kwh_per_km / (arrive - depart);
    for (int h = depart; h < arrive; ++h) {
      const auto idx = static_cast<std::size_t>(24 * d + h);
      p.plugged[idx] = 0;
      p.away_kwh[idx] = per_hour;
    }
  }
  return p;
}

const LoadProfile* ProfilePool::find_load(std::string_view id) const {
  for (const auto& p : load) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const DrivingProfile* ProfilePool::find_driving(std::string_view id) const {
  for (const auto& p : driving) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

ProfilePool synthetic_pool(int year, int count, std::uint64_t seed) {
  ProfilePool pool;
  for (int i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "load_%03d", i + 1);
    auto rng = RngStream::derive(seed, std::string("pool/") + id);
    pool.load.push_back(synthetic_load_profile(id, year, rng));
  }
  for (int i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "drive_%03d", i + 1);
    auto rng = RngStream::derive(seed, std::string("pool/") + id);
    pool.driving.push_back(synthetic_driving_profile(id, year, rng));
  }
  return pool;
}

}  // namespace quartersim

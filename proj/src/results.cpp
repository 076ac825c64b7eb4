#include "quartersim/results.hpp"

#include <json.hpp>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

namespace fs = std::filesystem;

std::size_t SeriesTable::column(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return i;
  }
  throw DomainError("no series for element '" + std::string(id) + "'");
}

const SeriesTable& ResultSet::at(const std::string& name) const {
  auto it = families.find(name);
  if (it == families.end()) throw DomainError("result set has no family '" + name + "'");
  return it->second;
}

void save_results(const ResultSet& r, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create result directory " + dir.string() + ": " + ec.message());
  for (const auto& [name, series] : r.families) {
    if (series.rows.size() != r.time.size()) throw DomainError("family " + name + " does not share the time axis");
    csv::Table t;
    t.header.push_back("timestamp");
    t.header.insert(t.header.end(), series.ids.begin(), series.ids.end());
    for (std::size_t k = 0; k < r.time.size(); ++k) {
      std::vector<std::string> row{format_timestamp(r.time[k])};
      for (double v : series.rows[k]) row.push_back(csv::format_double(v));
      t.rows.push_back(std::move(row));
    }
    csv::write_file(dir / (name + ".csv"), t);
  }
  nlohmann::json run;
  run["seed"] = r.seed;
  run["dt_s"] = r.dt_s;
  run["steps"] = r.time.size();
  std::vector<std::string> names;
  for (const auto& [name, series] : r.families) names.push_back(name);
  run["families"] = names;
  csv::write_text(dir / "run.json", run.dump(2) + "\n");
  std::string warnings;
  for (const auto& w : r.warnings) warnings += w + "\n";
  csv::write_text(dir / "warnings.txt", warnings);
}

ResultSet load_results(const fs::path& dir) {
  nlohmann::json run;
  try {
    run = nlohmann::json::parse(csv::read_text(dir / "run.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError((dir / "run.json").string(), e.what());
  }
  ResultSet r;
  r.seed = run.at("seed").get<std::uint64_t>();
  r.dt_s = run.at("dt_s").get<double>();
  bool first = true;
  for (const auto& name : run.at("families").get<std::vector<std::string>>()) {
    const auto path = dir / (name + ".csv");
    const auto t = csv::read_file(path);
    if (t.header.empty() || t.header[0] != "timestamp") throw ParseError(path.string(), "first column must be timestamp");
    SeriesTable s;
    s.ids.assign(t.header.begin() + 1, t.header.end());
    std::vector<Timestamp> times;
    for (const auto& row : t.rows) {
      times.push_back(parse_timestamp(row[0]));
      std::vector<double> values;
      for (std::size_t i = 1; i < row.size(); ++i) values.push_back(csv::parse_double(row[i], path.string()));
      s.rows.push_back(std::move(values));
    }
    if (first) r.time = times;
    else if (times != r.time) throw ParseError(path.string(), "time axis differs from the other families");
    first = false;
    r.families.emplace(name, std::move(s));
  }
  if (fs::exists(dir / "warnings.txt")) {
    const auto text = csv::read_text(dir / "warnings.txt");
    std::size_t start = 0;
    while (start < text.size()) {
      const auto end = text.find('\n', start);
      r.warnings.push_back(text.substr(start, end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  return r;
}

}  // namespace quartersim

#include "quartersim/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

namespace fs = std::filesystem;

Loadings compute_loadings(const ResultSet& r, const GridTopology& g) {
  std::map<std::string, double> i_max, s_rated;
  for (const auto& l : g.lines) i_max[l.id] = l.i_max_a;
  for (const auto& t : g.transformers) s_rated[t.id] = t.s_rated_mva;

  auto ratio = [](const SeriesTable& values, const std::map<std::string, double>& ratings, const char* what) {
    SeriesTable out;
    out.ids = values.ids;
    std::vector<double> denominators;
    for (const auto& id : values.ids) {
      auto it = ratings.find(id);
      if (it == ratings.end() || !(it->second > 0.0)) throw DomainError(std::string("missing rating for ") + what + " " + id);
      denominators.push_back(it->second);
    }
    for (const auto& row : values.rows) {
      std::vector<double> pct(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) pct[i] = std::abs(row[i]) / denominators[i] * 100.0;
      out.rows.push_back(std::move(pct));
    }
    return out;
  };
  return {ratio(r.at(family::kLineCurrent), i_max, "line"), ratio(r.at(family::kTrafoS), s_rated, "transformer")};
}

std::string_view to_string(CongestionKind kind) {
  switch (kind) {
    case CongestionKind::undervoltage: return "undervoltage";
    case CongestionKind::overvoltage: return "overvoltage";
    case CongestionKind::line_overload: return "line-overload";
    case CongestionKind::transformer_overload: return "transformer-overload";
  }
  return "?";
}

namespace {

/// `worse(a, b)` is true when a is more severe than b; `violates(v)` flags a step.
template <typename Violates, typename Worse>
void scan(const SeriesTable& s, const std::vector<Timestamp>& time, double dt_s, CongestionKind kind, double limit,
          Violates violates, Worse worse, std::vector<CongestionEvent>& out) {
  for (std::size_t e = 0; e < s.ids.size(); ++e) {
    std::size_t k = 0;
    while (k < s.rows.size()) {
      if (!violates(s.rows[k][e])) {
        ++k;
        continue;
      }
      CongestionEvent ev{kind, s.ids[e], time[k], 0.0, s.rows[k][e], limit};
      std::size_t steps = 0;
      for (; k < s.rows.size() && violates(s.rows[k][e]); ++k, ++steps) {
        if (worse(s.rows[k][e], ev.peak)) ev.peak = s.rows[k][e];
      }
      ev.duration_s = static_cast<double>(steps) * dt_s;
      out.push_back(std::move(ev));
    }
  }
}

}  // namespace

std::vector<CongestionEvent> detect_congestion(const Loadings& loadings, const SeriesTable& voltages,
                                               const std::vector<Timestamp>& time, double dt_s,
                                               const CongestionLimits& limits) {
  std::vector<CongestionEvent> out;
  const auto lower = std::less<double>{};
  const auto higher = std::greater<double>{};
  scan(voltages, time, dt_s, CongestionKind::undervoltage, limits.v_min_pu,
       [&](double v) { return v < limits.v_min_pu; }, lower, out);
  scan(voltages, time, dt_s, CongestionKind::overvoltage, limits.v_max_pu,
       [&](double v) { return v > limits.v_max_pu; }, higher, out);
  scan(loadings.line_pct, time, dt_s, CongestionKind::line_overload, limits.loading_max_pct,
       [&](double v) { return v > limits.loading_max_pct; }, higher, out);
  scan(loadings.trafo_pct, time, dt_s, CongestionKind::transformer_overload, limits.loading_max_pct,
       [&](double v) { return v > limits.loading_max_pct; }, higher, out);
  return out;
}

std::set<std::string> parse_formats(std::string_view text) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto token = csv::trim(text.substr(start, end - start));
    if (!token.empty()) {
      if (token != "csv" && token != "svg") throw FormatError("unknown output format '" + std::string(token) + "'");
      out.emplace(token);
    }
    start = end + 1;
  }
  if (out.empty()) throw FormatError("no output format given");
  return out;
}

std::string render_svg_chart(const std::string& title, const std::string& unit, const std::vector<Timestamp>& time,
                             const SeriesTable& series) {
  constexpr double kWidth = 1200.0, kHeight = 400.0;
  constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& row : series.rows) {
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-9) lo -= 0.5, hi += 0.5;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const auto steps = std::max<std::size_t>(time.size(), 2) - 1;
  auto x = [&](std::size_t k) { return kLeft + (kWidth - kLeft - kRight) * static_cast<double>(k) / static_cast<double>(steps); };
  auto y = [&](double v) { return kTop + (kHeight - kTop - kBottom) * (hi - v) / (hi - lo); };
  auto f = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '&') out += "&amp;";
      else if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '"') out += "&quot;";
      else out += c;
    }
    return out;
  };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 1200 400\" width=\"1200\" height=\"400\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"400\" fill=\"white\"/>\n";
  o << "<text x=\"600\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title)
    << "</text>\n";
  o << "<g stroke=\"black\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
    << kHeight - kBottom << "\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom << "\"/>\n";
  o << "</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << f(y(v) + 4) << "\" text-anchor=\"end\">" << f(v) << "</text>\n";
  }
  if (!time.empty()) {
    o << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 18 << "\">" << format_timestamp(time.front()) << "</text>\n";
    o << "<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"end\">"
      << format_timestamp(time.back()) << "</text>\n";
  }
  o << "<text x=\"16\" y=\"" << kTop - 12 << "\">" << escape(unit) << "</text>\n";
  o << "</g>\n";
  static constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  o << "<g fill=\"none\" stroke-width=\"1\">\n";
  for (std::size_t e = 0; e < series.ids.size(); ++e) {
    o << "<polyline stroke=\"" << kPalette[e % 10] << "\" points=\"";
    for (std::size_t k = 0; k < series.rows.size(); ++k) {
      if (k) o << ' ';
      o << f(x(k)) << ',' << f(y(series.rows[k][e]));
    }
    o << "\"><title>" << escape(series.ids[e]) << "</title></polyline>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

std::vector<fs::path> render_outputs(const ResultSet& r, const Loadings& loadings,
                                     const std::vector<CongestionEvent>& events, const std::set<std::string>& formats,
                                     const fs::path& out_dir) {
  if (formats.empty()) throw FormatError("no output format given");
  for (const auto& f : formats) {
    if (f != "csv" && f != "svg") throw FormatError("unknown output format '" + f + "'");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  struct Metric {
    const char* file;
    const char* title;
    const char* unit;
    const SeriesTable* series;
  };
  const Metric metrics[] = {
      {"voltages", "Bus voltages", "p.u.", &r.at(family::kBusVm)},
      {"line_loading", "Line loading", "%", &loadings.line_pct},
      {"trafo_loading", "Transformer loading", "%", &loadings.trafo_pct},
  };
  std::vector<fs::path> files;
  if (formats.count("csv")) {
    for (const auto& m : metrics) {
      csv::Table t;
      t.header.push_back("timestamp");
      t.header.insert(t.header.end(), m.series->ids.begin(), m.series->ids.end());
      for (std::size_t k = 0; k < r.time.size(); ++k) {
        std::vector<std::string> row{format_timestamp(r.time[k])};
        for (double v : m.series->rows[k]) row.push_back(csv::format_double(v));
        t.rows.push_back(std::move(row));
      }
      files.push_back(out_dir / (std::string(m.file) + ".csv"));
      csv::write_file(files.back(), t);
    }
    csv::Table t{{"kind", "element_id", "start", "duration_s", "peak", "limit"}, {}};
    for (const auto& e : events) {
      t.rows.push_back({std::string(to_string(e.kind)), e.element_id, format_timestamp(e.start), csv::format_double(e.duration_s),
                        csv::format_double(e.peak), csv::format_double(e.limit)});
    }
    files.push_back(out_dir / "congestion_events.csv");
    csv::write_file(files.back(), t);
  }
  if (formats.count("svg")) {
    for (const auto& m : metrics) {
      files.push_back(out_dir / (std::string(m.file) + ".svg"));
      csv::write_text(files.back(), render_svg_chart(m.title, m.unit, r.time, *m.series));
    }
  }
  return files;
}

}  // namespace quartersim

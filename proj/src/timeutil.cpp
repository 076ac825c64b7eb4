#include "quartersim/timeutil.hpp"

#include <cstdio>

#include "quartersim/csv.hpp"
#include "quartersim/error.hpp"

namespace quartersim {

using namespace std::chrono;

namespace {

int field(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  if (pos + len > text.size()) throw ParseError(std::string(whole), "truncated timestamp");
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') throw ParseError(std::string(whole), "bad timestamp");
  }
  return static_cast<int>(csv::parse_int(text.substr(pos, len), whole));
}

}  // namespace

Timestamp parse_timestamp(std::string_view raw) {
  auto text = csv::trim(raw);
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError(std::string(raw), "expected ISO-8601 timestamp");
  }
  const int y = field(text, 0, 4, raw);
  const int mo = field(text, 5, 2, raw);
  const int d = field(text, 8, 2, raw);
  int h = 0, mi = 0, s = 0;
  if (text.size() > 10) {
    if (text[10] != 'T' && text[10] != ' ') throw ParseError(std::string(raw), "bad date/time separator");
    h = field(text, 11, 2, raw);
    if (text.size() < 16 || text[13] != ':') throw ParseError(std::string(raw), "bad time");
    mi = field(text, 14, 2, raw);
    if (text.size() > 16) {
      if (text[16] != ':' || text.size() != 19) throw ParseError(std::string(raw), "bad seconds");
      s = field(text, 17, 2, raw);
    }
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw ParseError(std::string(raw), "timestamp out of range");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

double hour_of_day(Timestamp t) {
  const auto since_midnight = t - floor<days>(t);
  return static_cast<double>(since_midnight.count()) / 3600.0;
}

int weekday_index(Timestamp t) {
  const weekday wd{floor<days>(t)};
  return static_cast<int>(wd.iso_encoding()) - 1;
}

int day_of_year(Timestamp t) {
  const auto d = floor<days>(t);
  const year_month_day ymd{d};
  return static_cast<int>((d - sys_days{ymd.year() / January / 1}).count());
}

Timestamp year_start(int y) { return sys_days{year{y} / January / 1}; }

}  // namespace quartersim

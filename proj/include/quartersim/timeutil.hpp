#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace quartersim {

/// Wall-clock timestamps are naive local time, stored on the sys_seconds axis.
using Timestamp = std::chrono::sys_seconds;

/// Accepts "YYYY-MM-DDTHH:MM[:SS][Z]" (a space may replace 'T') and "YYYY-MM-DD".
Timestamp parse_timestamp(std::string_view text);
/// Always "YYYY-MM-DDTHH:MM:SS".
std::string format_timestamp(Timestamp t);

/// Hour of day in [0, 24) including the fractional part.
double hour_of_day(Timestamp t);
/// 0 = Monday ... 6 = Sunday.
int weekday_index(Timestamp t);
int day_of_year(Timestamp t);
Timestamp year_start(int year);

}  // namespace quartersim

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace obench {

/// UTC instant with microsecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

inline constexpr double kSecondsPerDay = 86400.0;

/// Accepts "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS[.ffffff]Z".
Timestamp parse_iso(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ", with a trimmed fractional part when non-zero.
std::string format_iso(Timestamp t);

double days_between(Timestamp from, Timestamp to);
Timestamp add_days(Timestamp t, double days);
Timestamp floor_to_day(Timestamp t);

}  // namespace obench

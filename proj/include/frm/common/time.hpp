#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace frm {

// UTC instant at one-second resolution. Serialized as "YYYY-MM-DDTHH:MM:SSZ".
using Timestamp = std::chrono::sys_seconds;

inline constexpr std::int64_t kSecondsPerDay = 86400;

Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

inline Timestamp from_unix(std::int64_t seconds) {
  return Timestamp{std::chrono::seconds{seconds}};
}
inline std::int64_t to_unix(Timestamp ts) { return ts.time_since_epoch().count(); }

inline Timestamp add_days(Timestamp ts, double days) {
  return ts + std::chrono::seconds{static_cast<std::int64_t>(days * kSecondsPerDay)};
}

inline double days_between(Timestamp from, Timestamp to) {
  return static_cast<double>(to_unix(to) - to_unix(from)) / kSecondsPerDay;
}

}  // namespace frm

#pragma once

#include <cstdint>
#include <string>

namespace pumpwatch {

inline constexpr std::int64_t kMsPerSecond = 1'000;
inline constexpr std::int64_t kMsPerHour = 3'600'000;
inline constexpr std::int64_t kMsPerDay = 86'400'000;

inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// Largest multiple of width_ms that is <= ts_ms.
inline constexpr std::int64_t floor_to(std::int64_t ts_ms, std::int64_t width_ms) {
  return floor_div(ts_ms, width_ms) * width_ms;
}

/// UTC calendar day index (days since the epoch).
inline constexpr std::int64_t utc_day(std::int64_t ts_ms) {
  return floor_div(ts_ms, kMsPerDay);
}

inline constexpr std::int64_t day_start_ms(std::int64_t day) { return day * kMsPerDay; }

/// "YYYYMMDD" for a UTC day index; used in dataset file names.
std::string format_utc_day(std::int64_t day);

}  // namespace pumpwatch

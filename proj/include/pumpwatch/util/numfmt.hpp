#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pumpwatch {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse; throws std::invalid_argument on malformed input.
double parse_double(std::string_view s);
std::int64_t parse_int64(std::string_view s);

}  // namespace pumpwatch

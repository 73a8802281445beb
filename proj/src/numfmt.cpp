#include "pumpwatch/util/numfmt.hpp"

#include <charconv>
#include <stdexcept>

namespace pumpwatch {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed number: '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int64(std::string_view s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace pumpwatch

#include "pumpwatch/core/types.hpp"

namespace pumpwatch {

const std::array<std::string_view, FeatureVector::kFeatureCount>&
FeatureVector::feature_names() {
  static const std::array<std::string_view, kFeatureCount> names = {
      "std_rush_orders", "avg_rush_orders", "std_trades",
      "std_volumes",     "avg_volumes",     "std_price",
      "avg_price",       "avg_price_max",   "avg_price_min"};
  return names;
}

void PipelineConfig::validate() const {
  if (chunk_seconds <= 0) throw std::invalid_argument("chunk_seconds must be positive");
  if (window_seconds <= 0) throw std::invalid_argument("window_seconds must be positive");
  if (cooldown_seconds <= 0) throw std::invalid_argument("cooldown_seconds must be positive");
  if (window_seconds % chunk_seconds != 0) {
    throw std::invalid_argument("window_seconds must be a multiple of chunk_seconds");
  }
  if (window_seconds < 2 * chunk_seconds) {
    throw std::invalid_argument("window must span at least two chunks");
  }
}

}  // namespace pumpwatch

#pragma once

#include <span>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::models {

/// One OHLCV bar. Empty periods are carried forward with zero volume.
struct Candle {
  std::int64_t start_ms = 0;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double quote_volume = 0.0;

  bool operator==(const Candle&) const = default;
};

/// OHLCV bars of `width_s` seconds (1 hour by default), anchored like
/// chunks at the first trade's floor boundary. Throws Error("empty input").
std::vector<Candle> build_candles(std::span<const TradeRecord> trades, std::int32_t width_s = 3600);

/// Adaptive-threshold baseline configuration. A candle is flagged when
/// both its close and its volume exceed (1 + factor) times the mean over
/// the lookback window that ends at the previous candle.
struct KampsConfig {
  std::int32_t lookback = 12;  // candles
  double price_factor = 0.05;
  double volume_factor = 2.0;

  void validate() const;

  /// Presets ordered by strictness; the factors increase componentwise and
  /// the lookback is shared, so Strict flags form a subset of Balanced
  /// flags, which form a subset of Initial flags on any input.
  static KampsConfig Initial() { return {12, 0.05, 2.0}; }
  static KampsConfig Balanced() { return {12, 0.10, 4.0}; }
  static KampsConfig Strict() { return {12, 0.25, 7.0}; }

  bool operator==(const KampsConfig&) const = default;
};

/// Per-candle anomaly flags. The first `lookback` candles are never
/// flagged (no full history). Throws Error("series too short") when no
/// candle has a full lookback window.
std::vector<char> kamps_detect(std::span<const Candle> candles, const KampsConfig& config);

}  // namespace pumpwatch::models

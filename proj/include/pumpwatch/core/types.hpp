#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pumpwatch {

/// Base class for all operational errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One exchange trade print. `is_buy_taker` means the buyer was the
/// aggressor (a buy market order consumed resting asks); exchanges that
/// publish a buyer-is-maker flag are negated at ingestion.
struct TradeRecord {
  std::int64_t trade_id = 0;
  std::int64_t ts_ms = 0;
  double price = 0.0;
  double qty = 0.0;
  bool is_buy_taker = false;

  /// Trade size in quote units.
  double quote_volume() const { return price * qty; }

  bool operator==(const TradeRecord&) const = default;
};

/// Total order on stored trade series.
inline bool trade_order(const TradeRecord& a, const TradeRecord& b) {
  if (a.ts_ms != b.ts_ms) return a.ts_ms < b.ts_ms;
  return a.trade_id < b.trade_id;
}

/// A single-shot buy order inferred by aggregating all buy-taker trades
/// that share one millisecond timestamp.
struct RushOrder {
  std::int64_t ts_ms = 0;
  double quote_volume = 0.0;
  std::int32_t n_fills = 0;

  bool operator==(const RushOrder&) const = default;
};

/// Fixed-width partition cell of the trade timeline. Prices carry forward
/// through empty chunks: close = price_max = price_min = previous close.
struct Chunk {
  std::int64_t start_ms = 0;
  std::int32_t width_s = 0;
  std::int64_t n_trades = 0;    // both sides
  double quote_volume = 0.0;    // both sides, quote units
  double rush_volume = 0.0;     // buy rush orders only
  double close = 0.0;
  double price_max = 0.0;
  double price_min = 0.0;

  std::int64_t end_ms() const { return start_ms + static_cast<std::int64_t>(width_s) * 1000; }

  bool operator==(const Chunk&) const = default;
};

/// The nine moving-window features for one chunk. Field order is fixed:
/// it defines the feature indices used by models, importances, and the
/// feature-file columns.
struct FeatureVector {
  std::int64_t chunk_start_ms = 0;
  double std_rush_orders = 0.0;
  double avg_rush_orders = 0.0;
  double std_trades = 0.0;
  double std_volumes = 0.0;
  double avg_volumes = 0.0;
  double std_price = 0.0;
  double avg_price = 0.0;
  double avg_price_max = 0.0;
  double avg_price_min = 0.0;
  bool label = false;

  static constexpr std::size_t kFeatureCount = 9;

  std::array<double, kFeatureCount> features() const {
    return {std_rush_orders, avg_rush_orders, std_trades,
            std_volumes,     avg_volumes,     std_price,
            avg_price,       avg_price_max,   avg_price_min};
  }

  static const std::array<std::string_view, kFeatureCount>& feature_names();

  bool operator==(const FeatureVector&) const = default;
};

/// Feature index of std_rush_orders, the single-feature detector default.
inline constexpr std::size_t kStdRushOrdersIndex = 0;

/// Ground-truth pump signal: the moment the target coin was revealed.
struct PumpEvent {
  std::string symbol;
  std::string exchange;
  std::int64_t signal_ts_ms = 0;
  std::string group;

  bool operator==(const PumpEvent&) const = default;
};

/// Chunking, windowing and alerting parameters shared by the whole pipeline.
struct PipelineConfig {
  std::int32_t chunk_seconds = 25;
  std::int32_t window_seconds = 25'200;  // 7 hours
  std::int32_t cooldown_seconds = 1'800;
  /// When false the window covers the k chunks strictly before the scored
  /// chunk instead of ending at it.
  bool window_includes_current = true;

  std::int64_t chunk_ms() const { return static_cast<std::int64_t>(chunk_seconds) * 1000; }
  std::int64_t cooldown_ms() const { return static_cast<std::int64_t>(cooldown_seconds) * 1000; }

  /// Chunks per window (k = w / s).
  std::int32_t window_chunks() const { return window_seconds / chunk_seconds; }

  /// Throws std::invalid_argument when the invariants do not hold
  /// (positive values, w a multiple of s, w >= 2s).
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

/// A fired pump detection. `score` is the classifier probability for
/// forest/regression models or the raw feature value for threshold models.
struct DetectionAlert {
  std::string symbol;
  std::int64_t chunk_start_ms = 0;
  double score = 0.0;
  std::string model_id;

  bool operator==(const DetectionAlert&) const = default;
};

}  // namespace pumpwatch

#include "pumpwatch/models/kamps.hpp"

#include <algorithm>

#include "pumpwatch/util/time.hpp"

namespace pumpwatch::models {

std::vector<Candle> build_candles(std::span<const TradeRecord> trades, std::int32_t width_s) {
  if (trades.empty()) throw Error("empty input: series has no trades");
  if (width_s <= 0) throw Error("candle width must be positive");

  const std::int64_t width_ms = static_cast<std::int64_t>(width_s) * 1000;
  const std::int64_t anchor = floor_to(trades.front().ts_ms, width_ms);

  std::vector<Candle> candles;
  auto new_candle = [&](std::int64_t start_ms, double carry_price) {
    Candle c;
    c.start_ms = start_ms;
    c.open = c.high = c.low = c.close = carry_price;
    return c;
  };
  candles.push_back(new_candle(anchor, trades.front().price));
  bool first_trade_of_candle = true;

  for (const TradeRecord& t : trades) {
    const std::int64_t idx = (t.ts_ms - anchor) / width_ms;
    while (static_cast<std::int64_t>(candles.size()) <= idx) {
      candles.push_back(new_candle(candles.back().start_ms + width_ms, candles.back().close));
      first_trade_of_candle = true;
    }
    Candle& c = candles[static_cast<std::size_t>(idx)];
    if (first_trade_of_candle) {
      c.open = c.high = c.low = t.price;
      first_trade_of_candle = false;
    }
    c.high = std::max(c.high, t.price);
    c.low = std::min(c.low, t.price);
    c.close = t.price;
    c.quote_volume += t.quote_volume();
  }
  return candles;
}

void KampsConfig::validate() const {
  if (lookback < 1) throw Error("lookback must be >= 1");
  if (price_factor <= 0.0 || volume_factor <= 0.0) throw Error("factors must be positive");
}

std::vector<char> kamps_detect(std::span<const Candle> candles, const KampsConfig& config) {
  config.validate();
  const std::size_t lb = static_cast<std::size_t>(config.lookback);
  if (candles.size() <= lb) {
    throw Error("series too short: " + std::to_string(candles.size()) +
                " candles, lookback needs " + std::to_string(lb + 1));
  }

  std::vector<char> flags(candles.size(), 0);
  for (std::size_t i = lb; i < candles.size(); ++i) {
    double close_sum = 0.0, volume_sum = 0.0;
    for (std::size_t j = i - lb; j < i; ++j) {
      close_sum += candles[j].close;
      volume_sum += candles[j].quote_volume;
    }
    const double mean_close = close_sum / static_cast<double>(lb);
    const double mean_volume = volume_sum / static_cast<double>(lb);
    const bool price_anomaly = candles[i].close > (1.0 + config.price_factor) * mean_close;
    const bool volume_anomaly = candles[i].quote_volume > (1.0 + config.volume_factor) * mean_volume;
    flags[i] = price_anomaly && volume_anomaly ? 1 : 0;
  }
  return flags;
}

}  // namespace pumpwatch::models

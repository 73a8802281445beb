#include "pumpwatch/eval/kamps_eval.hpp"

namespace pumpwatch::eval {

KampsEval evaluate_kamps(std::span<const EventTrades> events, const models::KampsConfig& config,
                         std::int32_t candle_width_s) {
  const std::int64_t width_ms = static_cast<std::int64_t>(candle_width_s) * 1000;
  KampsEval out;
  for (const EventTrades& et : events) {
    const auto candles = models::build_candles(et.trades, candle_width_s);
    const auto flags = models::kamps_detect(candles, config);
    std::vector<char> actual(candles.size(), 0);
    for (std::size_t i = 0; i < candles.size(); ++i) {
      if (et.event.signal_ts_ms >= candles[i].start_ms &&
          et.event.signal_ts_ms < candles[i].start_ms + width_ms) {
        actual[i] = 1;
      }
    }
    // The warm-up candles cannot be flagged; score only evaluable ones.
    const std::size_t lb = static_cast<std::size_t>(config.lookback);
    const Counts c = count_confusion(std::span(flags).subspan(lb), std::span(actual).subspan(lb));
    out.counts.tp += c.tp;
    out.counts.fp += c.fp;
    out.counts.fn += c.fn;
    out.counts.tn += c.tn;
  }
  out.metrics = out.counts.metrics();
  return out;
}

}  // namespace pumpwatch::eval

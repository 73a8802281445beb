#pragma once

#include <span>
#include <vector>

#include "pumpwatch/eval/metrics.hpp"
#include "pumpwatch/models/kamps.hpp"

namespace pumpwatch::eval {

struct EventTrades {
  PumpEvent event;
  std::vector<TradeRecord> trades;
};

struct KampsEval {
  Counts counts;
  PRF metrics;
};

/// Candle-level evaluation of the adaptive-threshold baseline: per event,
/// candles are labeled true when the signal falls inside them, flags come
/// from kamps_detect, and the confusion counts aggregate over all events.
KampsEval evaluate_kamps(std::span<const EventTrades> events, const models::KampsConfig& config,
                         std::int32_t candle_width_s = 3600);

}  // namespace pumpwatch::eval

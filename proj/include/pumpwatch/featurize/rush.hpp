#pragma once

#include <span>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::featurize {

/// Aggregates buy-taker trades sharing one millisecond into rush orders.
/// Sell-taker trades are ignored; output is sorted by ts_ms. Input must be
/// sorted by (ts_ms, trade_id); throws Error("unsorted input") otherwise.
std::vector<RushOrder> infer_rush_orders(std::span<const TradeRecord> trades);

}  // namespace pumpwatch::featurize

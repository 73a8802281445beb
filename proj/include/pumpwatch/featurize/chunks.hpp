#pragma once

#include <span>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::featurize {

struct ChunkSeries {
  std::int32_t width_s = 0;
  std::vector<Chunk> chunks;
};

/// Partitions a trade series into contiguous chunks of config.chunk_seconds,
/// anchored at floor(first_trade.ts_ms / chunk_ms) * chunk_ms. Gaps are
/// materialized as empty chunks with carried-forward prices. Rush orders
/// must come from the same series (their rush volume is summed per chunk).
/// Throws Error("empty input") on a series with no trades.
ChunkSeries chunk_series(std::span<const TradeRecord> trades,
                         std::span<const RushOrder> rush_orders,
                         const PipelineConfig& config);

}  // namespace pumpwatch::featurize

#include "pumpwatch/featurize/chunks.hpp"

#include <algorithm>

#include "pumpwatch/util/time.hpp"

namespace pumpwatch::featurize {

ChunkSeries chunk_series(std::span<const TradeRecord> trades,
                         std::span<const RushOrder> rush_orders,
                         const PipelineConfig& config) {
  config.validate();
  if (trades.empty()) throw Error("empty input: series has no trades");

  const std::int64_t width_ms = config.chunk_ms();
  const std::int64_t anchor = floor_to(trades.front().ts_ms, width_ms);

  ChunkSeries series;
  series.width_s = config.chunk_seconds;

  auto new_chunk = [&](std::int64_t start_ms, double carry_price) {
    Chunk c;
    c.start_ms = start_ms;
    c.width_s = config.chunk_seconds;
    c.close = c.price_max = c.price_min = carry_price;
    return c;
  };

  series.chunks.push_back(new_chunk(anchor, trades.front().price));

  for (const TradeRecord& t : trades) {
    if (t.ts_ms < trades.front().ts_ms) throw Error("unsorted input: timestamp before series start");
    const std::int64_t idx = (t.ts_ms - anchor) / width_ms;
    while (static_cast<std::int64_t>(series.chunks.size()) <= idx) {
      const Chunk& prev = series.chunks.back();
      series.chunks.push_back(new_chunk(prev.end_ms(), prev.close));
    }
    Chunk& c = series.chunks[static_cast<std::size_t>(idx)];
    if (c.n_trades == 0) {
      c.price_max = c.price_min = t.price;
    } else {
      c.price_max = std::max(c.price_max, t.price);
      c.price_min = std::min(c.price_min, t.price);
    }
    c.close = t.price;
    c.n_trades += 1;
    c.quote_volume += t.quote_volume();
  }

  for (const RushOrder& r : rush_orders) {
    const std::int64_t idx = (r.ts_ms - anchor) / width_ms;
    if (idx < 0 || idx >= static_cast<std::int64_t>(series.chunks.size())) {
      throw Error("rush order outside the trade series range");
    }
    series.chunks[static_cast<std::size_t>(idx)].rush_volume += r.quote_volume;
  }

  return series;
}

}  // namespace pumpwatch::featurize

#include "pumpwatch/replay/inject.hpp"

#include <algorithm>

#include "pumpwatch/featurize/chunks.hpp"
#include "pumpwatch/util/rng.hpp"

namespace pumpwatch::replay {

namespace {

constexpr std::int64_t kBurstSpanMs = 5'000;

double median_chunk_volume(std::span<const TradeRecord> base, const PipelineConfig& config) {
  const auto series = featurize::chunk_series(base, {}, config);
  std::vector<double> volumes;
  volumes.reserve(series.chunks.size());
  for (const Chunk& c : series.chunks) volumes.push_back(c.quote_volume);
  std::sort(volumes.begin(), volumes.end());
  const std::size_t n = volumes.size();
  return n % 2 == 1 ? volumes[n / 2] : (volumes[n / 2 - 1] + volumes[n / 2]) / 2.0;
}

}  // namespace

std::vector<TradeRecord> inject_pump(std::span<const TradeRecord> base,
                                     const InjectParams& params, const PipelineConfig& config) {
  if (base.empty()) throw Error("empty input: series has no trades");
  if (params.n_rush < 1) throw Error("n_rush must be >= 1");
  if (params.volume_scale < 0.0) throw Error("volume_scale must be non-negative");
  if (params.at_ms < base.front().ts_ms || params.at_ms > base.back().ts_ms) {
    throw Error("out of range: at_ms outside the series");
  }

  std::vector<TradeRecord> out(base.begin(), base.end());
  if (params.volume_scale == 0.0) return out;  // identity, nothing to add

  const double order_volume = params.volume_scale * median_chunk_volume(base, config);

  // Price of the last trade at or before the injection point.
  double local_price = base.front().price;
  for (const TradeRecord& t : base) {
    if (t.ts_ms > params.at_ms) break;
    local_price = t.price;
  }

  SplitMix64 rng(params.seed);

  // n_rush distinct millisecond offsets within the burst span.
  std::vector<std::int64_t> offsets(kBurstSpanMs);
  for (std::int64_t i = 0; i < kBurstSpanMs; ++i) offsets[i] = i;
  for (std::int32_t i = 0; i < params.n_rush; ++i) {
    const std::size_t j = i + rng.below(offsets.size() - i);
    std::swap(offsets[i], offsets[j]);
  }
  offsets.resize(params.n_rush);
  std::sort(offsets.begin(), offsets.end());

  for (std::int32_t i = 0; i < params.n_rush; ++i) {
    // Prices climb across the burst to 1.5x the local price, the shape of
    // a market-order cascade sweeping the ask side.
    const double order_price =
        local_price * (1.0 + 0.5 * static_cast<double>(i + 1) / params.n_rush);
    const std::int32_t fills = 2 + static_cast<std::int32_t>(rng.below(3));
    for (std::int32_t f = 0; f < fills; ++f) {
      TradeRecord t;
      t.ts_ms = params.at_ms + offsets[i];
      t.price = order_price * (1.0 + 0.001 * f);
      t.qty = (order_volume / fills) / t.price;
      t.is_buy_taker = true;
      out.push_back(t);
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const TradeRecord& a, const TradeRecord& b) { return a.ts_ms < b.ts_ms; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].trade_id = static_cast<std::int64_t>(i);
  return out;
}

}  // namespace pumpwatch::replay

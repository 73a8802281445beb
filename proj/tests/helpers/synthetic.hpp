#pragma once

#include <cmath>
#include <vector>

#include "pumpwatch/core/types.hpp"
#include "pumpwatch/featurize/chunks.hpp"
#include "pumpwatch/featurize/features.hpp"
#include "pumpwatch/featurize/rush.hpp"
#include "pumpwatch/replay/inject.hpp"
#include "pumpwatch/util/rng.hpp"
#include "pumpwatch/util/time.hpp"

namespace pumpwatch::testing {

// 2020-09-13T12:26:40 UTC; divisible by every chunk width used in tests.
inline constexpr std::int64_t kEpochMs = 1'600'000'200'000;

struct SynthConfig {
  std::int64_t start_ms = kEpochMs;
  std::int32_t duration_s = 7'200;
  double trades_per_sec = 2.0;
  double base_price = 1.0;
  double price_jitter = 0.0005;  // relative random-walk step
  double qty = 1.0;
  double qty_jitter = 0.0;
  double buy_fraction = 0.5;
  std::uint64_t seed = 1;
};

/// Quiet market: Poisson arrivals, mean-reverting price walk, roughly
/// balanced taker sides.
inline std::vector<TradeRecord> poisson_series(const SynthConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  std::vector<TradeRecord> trades;
  double t_ms = 0.0;
  double price = cfg.base_price;
  const double end_ms = static_cast<double>(cfg.duration_s) * 1000.0;
  std::int64_t id = 0;
  while (true) {
    t_ms += -std::log(1.0 - rng.next_double()) / cfg.trades_per_sec * 1000.0;
    if (t_ms >= end_ms) break;
    price *= 1.0 + cfg.price_jitter * (2.0 * rng.next_double() - 1.0);
    // Mean-revert so long series stay near the base price.
    price += 0.001 * (cfg.base_price - price);
    TradeRecord tr;
    tr.trade_id = id++;
    tr.ts_ms = cfg.start_ms + static_cast<std::int64_t>(t_ms);
    tr.price = price;
    tr.qty = cfg.qty * (1.0 + cfg.qty_jitter * (2.0 * rng.next_double() - 1.0));
    tr.is_buy_taker = rng.next_double() < cfg.buy_fraction;
    trades.push_back(tr);
  }
  return trades;
}

inline std::vector<FeatureVector> batch_features(std::span<const TradeRecord> trades,
                                                 const PipelineConfig& config) {
  const auto rush = featurize::infer_rush_orders(trades);
  const auto series = featurize::chunk_series(trades, rush, config);
  return featurize::moving_features(series, config);
}

/// Chunk series with uncorrelated random aggregates, for feature oracles.
inline featurize::ChunkSeries random_chunk_series(std::uint64_t seed, std::size_t n,
                                                  std::int32_t width_s) {
  SplitMix64 rng(seed);
  featurize::ChunkSeries series;
  series.width_s = width_s;
  const std::int64_t width_ms = static_cast<std::int64_t>(width_s) * 1000;
  for (std::size_t i = 0; i < n; ++i) {
    Chunk c;
    c.start_ms = kEpochMs + static_cast<std::int64_t>(i) * width_ms;
    c.width_s = width_s;
    c.n_trades = static_cast<std::int64_t>(rng.below(60));
    c.close = rng.uniform(1.0, 10.0);
    c.price_max = c.close * (1.0 + 0.02 * rng.next_double());
    c.price_min = c.close * (1.0 - 0.02 * rng.next_double());
    c.quote_volume = c.n_trades == 0 ? 0.0 : rng.uniform(0.0, 400.0);
    c.rush_volume = rng.next_double() < 0.3 ? 0.0 : rng.uniform(0.0, c.quote_volume);
    series.chunks.push_back(c);
  }
  return series;
}

struct InjectFixture {
  std::vector<TradeRecord> base;
  std::vector<TradeRecord> injected;
  std::int64_t at_ms = 0;
  std::int64_t injection_chunk_start = 0;
};

/// Base series plus a default burst at `position` of the way through. The
/// burst starts one second into a chunk so it stays inside it for any
/// chunk width >= 10 s.
inline InjectFixture make_injected_series(std::uint64_t seed, const PipelineConfig& config,
                                          double scale = 50.0, double position = 0.7,
                                          SynthConfig synth = {}) {
  synth.seed = seed;
  InjectFixture fx;
  fx.base = poisson_series(synth);
  const std::int64_t span_ms = static_cast<std::int64_t>(synth.duration_s) * 1000;
  const std::int64_t rough = synth.start_ms + static_cast<std::int64_t>(position * span_ms);
  fx.injection_chunk_start = floor_to(rough, config.chunk_ms());
  fx.at_ms = fx.injection_chunk_start + 1'000;
  replay::InjectParams params;
  params.at_ms = fx.at_ms;
  params.volume_scale = scale;
  params.seed = seed ^ 0x5eedULL;
  fx.injected = replay::inject_pump(fx.base, params, config);
  return fx;
}

/// Drops everything after the injection chunk; training on these keeps
/// the spike out of every later window.
inline std::vector<TradeRecord> truncate_at_chunk_end(std::span<const TradeRecord> trades,
                                                      std::int64_t chunk_start,
                                                      const PipelineConfig& config) {
  std::vector<TradeRecord> out;
  const std::int64_t end = chunk_start + config.chunk_ms();
  for (const TradeRecord& t : trades) {
    if (t.ts_ms < end) out.push_back(t);
  }
  return out;
}

}  // namespace pumpwatch::testing

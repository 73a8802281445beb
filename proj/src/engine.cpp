#include "pumpwatch/replay/engine.hpp"

#include <algorithm>

#include "pumpwatch/featurize/chunks.hpp"
#include "pumpwatch/featurize/rush.hpp"
#include "pumpwatch/ingest/files.hpp"
#include "pumpwatch/util/time.hpp"

namespace pumpwatch::replay {

ReplayEngine::ReplayEngine(std::string symbol, const models::ModelArtifact& artifact)
    : symbol_(std::move(symbol)), artifact_(artifact), config_(artifact.config) {
  config_.validate();
  window_k_ = static_cast<std::size_t>(config_.window_chunks());
  const auto reserve = [&](std::vector<double>& v) { v.reserve(window_k_); };
  reserve(ring_rush_);
  reserve(ring_trades_);
  reserve(ring_volume_);
  reserve(ring_close_);
  reserve(ring_max_);
  reserve(ring_min_);
  win_rush_.resize(window_k_);
  win_trades_.resize(window_k_);
  win_volume_.resize(window_k_);
  win_close_.resize(window_k_);
  win_max_.resize(window_k_);
  win_min_.resize(window_k_);
}

void ReplayEngine::open_chunk(std::int64_t start_ms, double carry_price) {
  current_ = Chunk{};
  current_.start_ms = start_ms;
  current_.width_s = config_.chunk_seconds;
  current_.close = current_.price_max = current_.price_min = carry_price;
}

void ReplayEngine::flush_rush_group() {
  if (!rush_ms_) return;
  current_.rush_volume += rush_accum_;
  rush_ms_.reset();
  rush_accum_ = 0.0;
}

void ReplayEngine::push_ring(const Chunk& c) {
  auto put = [&](std::vector<double>& ring, double v) {
    if (ring.size() < window_k_) {
      ring.push_back(v);
    } else {
      ring[ring_head_] = v;
    }
  };
  put(ring_rush_, c.rush_volume);
  put(ring_trades_, static_cast<double>(c.n_trades));
  put(ring_volume_, c.quote_volume);
  put(ring_close_, c.close);
  put(ring_max_, c.price_max);
  put(ring_min_, c.price_min);
  ring_head_ = (ring_head_ + 1) % window_k_;
  ring_size_ = std::min(ring_size_ + 1, window_k_);
}

void ReplayEngine::score_window(std::int64_t chunk_start_ms) {
  // Unroll the ring into scratch in logical order (oldest first) so the
  // summation order matches the batch path exactly.
  const std::size_t start = (ring_head_ + window_k_ - ring_size_) % window_k_;
  for (std::size_t i = 0; i < window_k_; ++i) {
    const std::size_t slot = (start + i) % window_k_;
    win_rush_[i] = ring_rush_[slot];
    win_trades_[i] = ring_trades_[slot];
    win_volume_[i] = ring_volume_[slot];
    win_close_[i] = ring_close_[slot];
    win_max_[i] = ring_max_[slot];
    win_min_[i] = ring_min_[slot];
  }
  featurize::WindowView window{win_rush_, win_trades_, win_volume_,
                               win_close_, win_max_,   win_min_};
  const FeatureVector v = featurize::features_from_window(window, chunk_start_ms);
  const auto features = v.features();
  if (!artifact_.positive(features)) return;
  if (last_alert_start_ms_ &&
      chunk_start_ms - *last_alert_start_ms_ < config_.cooldown_ms()) {
    return;
  }
  last_alert_start_ms_ = chunk_start_ms;
  alerts_.push_back({symbol_, chunk_start_ms, artifact_.score(features), artifact_.model_id});
}

void ReplayEngine::finalize_chunk() {
  flush_rush_group();
  const Chunk finished = current_;
  ++chunks_done_;

  if (config_.window_includes_current) {
    push_ring(finished);
    if (ring_size_ == window_k_) score_window(finished.start_ms);
  } else {
    if (ring_size_ == window_k_) score_window(finished.start_ms);
    push_ring(finished);
  }
}

void ReplayEngine::on_trade(const TradeRecord& trade) {
  if (started_ && !trade_order(last_trade_, trade)) {
    throw Error("unsorted input: trade " + std::to_string(trade.trade_id) + " at " +
                std::to_string(trade.ts_ms) + " after " + std::to_string(last_trade_.trade_id) +
                " at " + std::to_string(last_trade_.ts_ms));
  }

  const std::int64_t width_ms = config_.chunk_ms();
  if (!started_) {
    started_ = true;
    open_chunk(floor_to(trade.ts_ms, width_ms), trade.price);
  }

  while (trade.ts_ms >= current_.start_ms + width_ms) {
    finalize_chunk();
    open_chunk(current_.start_ms + width_ms, current_.close);
  }

  if (current_.n_trades == 0) {
    current_.price_max = current_.price_min = trade.price;
  } else {
    current_.price_max = std::max(current_.price_max, trade.price);
    current_.price_min = std::min(current_.price_min, trade.price);
  }
  current_.close = trade.price;
  current_.n_trades += 1;
  current_.quote_volume += trade.quote_volume();

  if (trade.is_buy_taker) {
    if (rush_ms_ && *rush_ms_ == trade.ts_ms) {
      rush_accum_ += trade.quote_volume();
    } else {
      flush_rush_group();
      rush_ms_ = trade.ts_ms;
      rush_accum_ = trade.quote_volume();
    }
  }

  last_trade_ = trade;
}

void ReplayEngine::finish() {
  if (!started_) return;
  finalize_chunk();
  started_ = false;
}

std::vector<DetectionAlert> replay_detect(const std::filesystem::path& trade_csv,
                                          const models::ModelArtifact& artifact,
                                          const PipelineConfig& config, std::string symbol) {
  if (config != artifact.config) {
    throw Error("config mismatch: replay chunk/window/cooldown differ from the model artifact");
  }
  ReplayEngine engine(std::move(symbol), artifact);
  ingest::for_each_trade_csv(trade_csv, [&](const TradeRecord& t) { engine.on_trade(t); });
  engine.finish();
  return engine.take_alerts();
}

std::vector<DetectionAlert> cooldown_filter(std::span<const FeatureVector> vectors,
                                            const models::ModelArtifact& artifact,
                                            std::string_view symbol) {
  std::vector<DetectionAlert> alerts;
  std::optional<std::int64_t> last_start;
  const std::int64_t cooldown_ms = artifact.config.cooldown_ms();
  for (const FeatureVector& v : vectors) {
    const auto features = v.features();
    if (!artifact.positive(features)) continue;
    if (last_start && v.chunk_start_ms - *last_start < cooldown_ms) continue;
    last_start = v.chunk_start_ms;
    alerts.push_back(
        {std::string(symbol), v.chunk_start_ms, artifact.score(features), artifact.model_id});
  }
  return alerts;
}

std::vector<DetectionAlert> batch_detect(std::span<const TradeRecord> trades,
                                         const models::ModelArtifact& artifact,
                                         std::string_view symbol) {
  const auto rush = featurize::infer_rush_orders(trades);
  const auto series = featurize::chunk_series(trades, rush, artifact.config);
  const std::size_t k = static_cast<std::size_t>(artifact.config.window_chunks());
  const std::size_t warmup = artifact.config.window_includes_current ? k - 1 : k;
  if (series.chunks.size() <= warmup) return {};  // nothing scorable
  const auto vectors = featurize::moving_features(series, artifact.config);
  return cooldown_filter(vectors, artifact, symbol);
}

}  // namespace pumpwatch::replay

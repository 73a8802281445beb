#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pumpwatch/featurize/features.hpp"
#include "pumpwatch/models/artifact.hpp"

namespace pumpwatch::replay {

/// Streaming detector for one symbol. Trades arrive in (ts_ms, trade_id)
/// order; at each chunk boundary the finished chunk joins a ring of the
/// last k chunks, the window is scored, and an alert is emitted when the
/// model fires outside the cooldown. Memory stays O(window chunks)
/// regardless of stream length. Single-threaded per symbol; independent
/// engines replay different symbols concurrently.
class ReplayEngine {
 public:
  ReplayEngine(std::string symbol, const models::ModelArtifact& artifact);

  void on_trade(const TradeRecord& trade);

  /// Finalizes the chunk in progress. Call once, after the last trade.
  void finish();

  const std::vector<DetectionAlert>& alerts() const { return alerts_; }
  std::vector<DetectionAlert> take_alerts() { return std::move(alerts_); }

  /// Chunks currently buffered (bounded by the window length).
  std::size_t buffered_chunks() const { return ring_size_; }

 private:
  void open_chunk(std::int64_t start_ms, double carry_price);
  void flush_rush_group();
  void finalize_chunk();
  void score_window(std::int64_t chunk_start_ms);
  void push_ring(const Chunk& c);

  std::string symbol_;
  const models::ModelArtifact& artifact_;
  PipelineConfig config_;
  std::size_t window_k_ = 0;

  bool started_ = false;
  TradeRecord last_trade_;
  Chunk current_;

  // Pending rush order (one millisecond of buy-taker fills).
  std::optional<std::int64_t> rush_ms_;
  double rush_accum_ = 0.0;

  // Ring buffers of per-chunk aggregates, capacity window_k_.
  std::vector<double> ring_rush_, ring_trades_, ring_volume_, ring_close_, ring_max_, ring_min_;
  std::size_t ring_head_ = 0;  // next write slot
  std::size_t ring_size_ = 0;
  std::size_t chunks_done_ = 0;

  // Scratch reused per scored window, oldest chunk first.
  std::vector<double> win_rush_, win_trades_, win_volume_, win_close_, win_max_, win_min_;

  std::optional<std::int64_t> last_alert_start_ms_;
  std::vector<DetectionAlert> alerts_;
};

/// Streams a trade file through a ReplayEngine. Throws Error on a
/// malformed line (with its line number), unsorted input, or when the
/// supplied config disagrees with the artifact's.
std::vector<DetectionAlert> replay_detect(const std::filesystem::path& trade_csv,
                                          const models::ModelArtifact& artifact,
                                          const PipelineConfig& config, std::string symbol);

/// Reference path: batch featurize -> score -> cooldown-filter. Replay and
/// batch produce identical alert streams on the same data.
std::vector<DetectionAlert> batch_detect(std::span<const TradeRecord> trades,
                                         const models::ModelArtifact& artifact,
                                         std::string_view symbol);

/// The cooldown gate shared by both paths: keeps a positive chunk's alert
/// only when no alert fired within cooldown_ms before it.
std::vector<DetectionAlert> cooldown_filter(std::span<const FeatureVector> vectors,
                                            const models::ModelArtifact& artifact,
                                            std::string_view symbol);

}  // namespace pumpwatch::replay

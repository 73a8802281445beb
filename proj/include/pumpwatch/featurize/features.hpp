#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "pumpwatch/core/types.hpp"
#include "pumpwatch/featurize/chunks.hpp"

namespace pumpwatch::featurize {

struct WindowStats {
  double mean = 0.0;
  double stddev = 0.0;  // population form
};

/// Mean and population standard deviation of one window column. Two-pass;
/// the replay engine calls this on the exact same value sequence as the
/// batch path, which is what makes replay and batch bit-identical.
WindowStats window_stats(std::span<const double> values);

/// Per-chunk aggregate columns extracted once so every window is a
/// contiguous slice.
struct ChunkColumns {
  std::vector<double> rush_volume;
  std::vector<double> n_trades;
  std::vector<double> quote_volume;
  std::vector<double> close;
  std::vector<double> price_max;
  std::vector<double> price_min;

  static ChunkColumns from(const ChunkSeries& series);
  std::size_t size() const { return close.size(); }
};

/// One window's column slices, oldest chunk first.
struct WindowView {
  std::span<const double> rush_volume;
  std::span<const double> n_trades;
  std::span<const double> quote_volume;
  std::span<const double> close;
  std::span<const double> price_max;
  std::span<const double> price_min;
};

/// Assembles the nine features from one window. Batch and streaming paths
/// both go through here so their outputs are bit-identical.
FeatureVector features_from_window(const WindowView& window, std::int64_t chunk_start_ms);

/// Computes the nine features for the window of k chunks that ends at
/// `end_index` (inclusive). The caller owns window placement.
FeatureVector window_features(const ChunkColumns& cols, std::size_t end_index,
                              std::size_t k, std::int64_t chunk_start_ms);

/// The nine moving-window features for every chunk with a full window.
/// With config.window_includes_current the window ends at the scored chunk
/// and the first k-1 chunks emit nothing; otherwise the window covers the
/// k chunks before the scored chunk and the first k chunks emit nothing.
/// Throws Error("series too short") when no window fits.
std::vector<FeatureVector> moving_features(const ChunkSeries& series,
                                           const PipelineConfig& config);

struct LabelOutcome {
  std::size_t applied = 0;               // events that landed on a chunk
  std::vector<PumpEvent> skipped;        // events outside the vector range
};

/// Sets label = true on the vector whose chunk contains each event's
/// signal timestamp (half-open [start, start + s) ranges). Events that
/// fall outside the series are skipped and reported.
LabelOutcome label_chunks(std::vector<FeatureVector>& vectors,
                          std::span<const PumpEvent> events,
                          const PipelineConfig& config);

/// Feature file: CSV with a fixed header
/// chunk_start_ms,<nine feature columns>,label. Doubles are written
/// shortest-round-trip so read-back is exact.
void write_feature_csv(const std::filesystem::path& path,
                       std::span<const FeatureVector> vectors);
std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& path);

}  // namespace pumpwatch::featurize

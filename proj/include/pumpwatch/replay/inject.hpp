#pragma once

#include <span>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::replay {

struct InjectParams {
  std::int64_t at_ms = 0;
  std::int32_t n_rush = 10;
  double volume_scale = 50.0;  // x the series' median per-chunk quote volume
  std::uint64_t seed = 0;
};

/// Inserts a buy burst into a trade series: n_rush distinct milliseconds
/// within 5 seconds of at_ms, each a multi-fill rush order carrying
/// volume_scale times the series' median per-chunk quote volume, at prices
/// rising to 1.5x the local price. The output is re-sorted and re-id'd.
/// volume_scale 0 returns the series unchanged. Throws Error("out of
/// range") when at_ms lies outside the series.
std::vector<TradeRecord> inject_pump(std::span<const TradeRecord> base,
                                     const InjectParams& params, const PipelineConfig& config);

}  // namespace pumpwatch::replay

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "pumpwatch/eval/metrics.hpp"
#include "pumpwatch/models/artifact.hpp"

namespace pumpwatch::eval {

/// One event's labeled feature vectors (typically from its core 3-day
/// series).
struct EventDataset {
  PumpEvent event;
  std::vector<FeatureVector> vectors;
};

struct FoldMetrics {
  std::vector<std::size_t> test_events;  // indices into the dataset list
  Counts counts;
  PRF metrics;
};

struct CVReport {
  std::int32_t k = 0;
  std::uint64_t seed = 0;
  bool event_grouped = true;
  std::vector<FoldMetrics> folds;
  PRF mean;  // macro-average over folds
};

/// Deterministic fold assignment: events are shuffled with the seed and
/// dealt round-robin, so fold sizes differ by at most one.
std::vector<std::vector<std::size_t>> assign_folds(std::size_t n_events, std::int32_t k,
                                                   std::uint64_t seed);

/// Event-grouped k-fold cross-validation: all chunks of one event stay in
/// one fold so a pump's own window cannot leak into its training split.
///`event_grouped = false` switches to chunk-random folds for comparison.
/// Throws when the dataset has fewer than k events.
CVReport kfold_cv(std::span<const EventDataset> datasets, const models::ModelSpec& spec,
                  std::int32_t k, std::uint64_t seed, bool event_grouped = true,
                  unsigned n_threads = 1);

nlohmann::json cv_report_to_json(const CVReport& report, const PipelineConfig& config);
void write_cv_summary_csv(const std::filesystem::path& path, const CVReport& report);

}  // namespace pumpwatch::eval

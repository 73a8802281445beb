#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::models {

/// Single-feature detector: fires iff the feature value is >= threshold.
struct ThresholdModel {
  std::size_t feature_index = kStdRushOrdersIndex;
  double threshold = 0.0;

  bool fires(double value) const { return value >= threshold; }
  bool fires(const FeatureVector& v) const { return fires(v.features()[feature_index]); }

  nlohmann::json to_json() const;
  static ThresholdModel from_json(const nlohmann::json& j);
};

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct ThresholdFit {
  ThresholdModel model;
  std::vector<PRPoint> curve;  // ascending by threshold
};

/// Builds the precision-recall curve over every distinct value of the
/// chosen feature and picks the threshold with the best train F1 (highest
/// threshold on ties, so the detector fires least). Throws on inputs
/// without at least one positive and one negative label.
ThresholdFit fit_threshold_detector(std::span<const FeatureVector> train,
                                    std::size_t feature_index = kStdRushOrdersIndex);

/// CSV `threshold,precision,recall`.
void write_pr_curve_csv(const std::filesystem::path& path, std::span<const PRPoint> curve);

}  // namespace pumpwatch::models

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "pumpwatch/models/matrix.hpp"

namespace pumpwatch::models {

struct RFParams {
  std::int32_t n_trees = 200;
  std::int32_t min_samples_leaf = 6;
  std::int32_t max_depth = 4;
  std::int32_t features_per_split = 3;  // ceil(sqrt(9))
  std::uint64_t seed = 0;
  /// Full-sample test mode when false (each tree sees every row once).
  bool bootstrap = true;
  /// Positive-class weight; 1.0 keeps raw labels (the default training mode).
  double positive_weight = 1.0;

  void validate(std::size_t n_features) const;

  bool operator==(const RFParams&) const = default;
};

/// Flat node array; children index into the same vector. Prediction walks
/// left when x[feature] < threshold, right otherwise.
struct TreeNode {
  bool is_leaf = true;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double leaf_score = 0.0;  // positive-class fraction
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
};

/// Best split of one node chosen by exhaustive Gini search over candidate
/// features; exposed so a brute-force oracle can be compared against the
/// stump case.
struct SplitChoice {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class ForestModel {
 public:
  /// Grows params.n_trees trees, each on its own bootstrap sample, with
  /// features_per_split features sampled per node. Tree t draws all of its
  /// randomness from SplitMix64(seed + t), so parallel and serial training
  /// produce identical forests. Throws on empty input or single-class labels.
  static ForestModel train(const FeatureMatrix& X, std::span<const char> y,
                           const RFParams& params, unsigned n_threads = 1);

  /// Mean over trees of the reached leaf's positive fraction.
  double score(std::span<const double> x) const;
  bool classify(std::span<const double> x) const { return score(x) >= 0.5; }

  /// Mean decrease in Gini impurity per feature, normalized to sum to 1.
  const std::vector<double>& gini_importance() const { return importances_; }

  const RFParams& params() const { return params_; }
  std::size_t n_features() const { return n_features_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);

 private:
  RFParams params_;
  std::size_t n_features_ = 0;
  std::vector<DecisionTree> trees_;
  std::vector<double> importances_;
};

/// Exhaustive best-Gini split over the given candidate features with
/// midpoint thresholds and the min_samples_leaf constraint. Ties break to
/// the lowest feature index, then the lowest threshold. Sample indices may
/// repeat (bootstrap multiplicity). Weights positives by positive_weight.
SplitChoice best_gini_split(const FeatureMatrix& X, std::span<const char> y,
                            std::span<const std::size_t> sample_indices,
                            std::span<const std::int32_t> candidate_features,
                            std::int32_t min_samples_leaf, double positive_weight = 1.0);

}  // namespace pumpwatch::models

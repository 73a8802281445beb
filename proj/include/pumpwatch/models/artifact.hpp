#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "pumpwatch/models/forest.hpp"
#include "pumpwatch/models/logreg.hpp"
#include "pumpwatch/models/threshold.hpp"

namespace pumpwatch::models {

enum class ModelType { RandomForest, LogisticRegression, Threshold };

std::string_view model_type_name(ModelType t);
ModelType model_type_from_name(std::string_view name);

/// What to train: a model type plus its parameters.
struct ModelSpec {
  ModelType type = ModelType::RandomForest;
  RFParams rf;
  LRParams lr;
  std::size_t threshold_feature = kStdRushOrdersIndex;
};

/// A trained detector plus the pipeline configuration it was trained
/// under. The replay engine refuses to run an artifact whose chunking
/// disagrees with its own.
class ModelArtifact {
 public:
  static constexpr int kFormatVersion = 1;

  std::string model_id;
  PipelineConfig config;
  std::variant<ForestModel, LRModel, ThresholdModel> model;

  ModelType type() const;

  /// Classifier probability, or the raw feature value for threshold models.
  double score(std::span<const double> features) const;
  bool positive(std::span<const double> features) const;

  nlohmann::json to_json() const;
  static ModelArtifact from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static ModelArtifact load(const std::filesystem::path& path);
};

/// Trains per the spec and wraps the result. For threshold models the PR
/// curve computed on the training set is returned alongside.
struct TrainOutput {
  ModelArtifact artifact;
  std::optional<std::vector<PRPoint>> pr_curve;
};
TrainOutput train_artifact(const ModelSpec& spec, std::span<const FeatureVector> train,
                           const PipelineConfig& config, std::string model_id = "",
                           unsigned n_threads = 1);

}  // namespace pumpwatch::models

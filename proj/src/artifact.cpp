#include "pumpwatch/models/artifact.hpp"

#include <fstream>

#include "pumpwatch/core/serde.hpp"

namespace pumpwatch::models {

std::string_view model_type_name(ModelType t) {
  switch (t) {
    case ModelType::RandomForest: return "random_forest";
    case ModelType::LogisticRegression: return "logistic_regression";
    case ModelType::Threshold: return "threshold";
  }
  return "unknown";
}

ModelType model_type_from_name(std::string_view name) {
  if (name == "random_forest" || name == "rf") return ModelType::RandomForest;
  if (name == "logistic_regression" || name == "logreg" || name == "lr") {
    return ModelType::LogisticRegression;
  }
  if (name == "threshold") return ModelType::Threshold;
  throw Error("unknown model type: '" + std::string(name) + "'");
}

ModelType ModelArtifact::type() const {
  if (std::holds_alternative<ForestModel>(model)) return ModelType::RandomForest;
  if (std::holds_alternative<LRModel>(model)) return ModelType::LogisticRegression;
  return ModelType::Threshold;
}

double ModelArtifact::score(std::span<const double> features) const {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ThresholdModel>) {
          return features[m.feature_index];
        } else {
          return m.score(features);
        }
      },
      model);
}

bool ModelArtifact::positive(std::span<const double> features) const {
  return std::visit(
      [&](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ThresholdModel>) {
          return m.fires(features[m.feature_index]);
        } else {
          return m.classify(features);
        }
      },
      model);
}

nlohmann::json ModelArtifact::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["model_id"] = model_id;
  j["model_type"] = model_type_name(type());
  j["config"] = config;
  j["model"] = std::visit([](const auto& m) { return m.to_json(); }, model);
  return j;
}

ModelArtifact ModelArtifact::from_json(const nlohmann::json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw Error("unsupported model format version " + std::to_string(version));
  }
  ModelArtifact a;
  a.model_id = j.at("model_id").get<std::string>();
  a.config = j.at("config").get<PipelineConfig>();
  const ModelType type = model_type_from_name(j.at("model_type").get<std::string>());
  const auto& mj = j.at("model");
  switch (type) {
    case ModelType::RandomForest: a.model = ForestModel::from_json(mj); break;
    case ModelType::LogisticRegression: a.model = LRModel::from_json(mj); break;
    case ModelType::Threshold: a.model = ThresholdModel::from_json(mj); break;
  }
  return a;
}

void ModelArtifact::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << to_json().dump(2) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

ModelArtifact ModelArtifact::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

TrainOutput train_artifact(const ModelSpec& spec, std::span<const FeatureVector> train,
                           const PipelineConfig& config, std::string model_id,
                           unsigned n_threads) {
  config.validate();
  TrainOutput out;
  out.artifact.config = config;
  out.artifact.model_id =
      model_id.empty() ? std::string(model_type_name(spec.type)) : std::move(model_id);

  switch (spec.type) {
    case ModelType::RandomForest: {
      const FeatureMatrix X = FeatureMatrix::from_vectors(train);
      const std::vector<char> y = labels_of(train);
      out.artifact.model = ForestModel::train(X, y, spec.rf, n_threads);
      break;
    }
    case ModelType::LogisticRegression: {
      const FeatureMatrix X = FeatureMatrix::from_vectors(train);
      const std::vector<char> y = labels_of(train);
      out.artifact.model = LRModel::train(X, y, spec.lr);
      break;
    }
    case ModelType::Threshold: {
      ThresholdFit fit = fit_threshold_detector(train, spec.threshold_feature);
      out.artifact.model = fit.model;
      out.pr_curve = std::move(fit.curve);
      break;
    }
  }
  return out;
}

}  // namespace pumpwatch::models

#include "pumpwatch/models/threshold.hpp"

#include <algorithm>
#include <fstream>

#include "pumpwatch/util/numfmt.hpp"

namespace pumpwatch::models {

nlohmann::json ThresholdModel::to_json() const {
  return nlohmann::json{{"feature_index", feature_index}, {"threshold", threshold}};
}

ThresholdModel ThresholdModel::from_json(const nlohmann::json& j) {
  ThresholdModel m;
  m.feature_index = j.at("feature_index").get<std::size_t>();
  m.threshold = j.at("threshold").get<double>();
  return m;
}

ThresholdFit fit_threshold_detector(std::span<const FeatureVector> train,
                                    std::size_t feature_index) {
  if (feature_index >= FeatureVector::kFeatureCount) throw Error("feature index out of range");

  std::vector<std::pair<double, char>> points;
  points.reserve(train.size());
  std::size_t total_pos = 0;
  for (const FeatureVector& v : train) {
    points.emplace_back(v.features()[feature_index], v.label ? 1 : 0);
    total_pos += v.label ? 1 : 0;
  }
  if (total_pos == 0 || total_pos == points.size()) {
    throw Error("degenerate labels: both classes required");
  }

  std::sort(points.begin(), points.end());

  // Walking thresholds from low to high, the fired set is the suffix of
  // points at or above the candidate value.
  ThresholdFit fit;
  fit.model.feature_index = feature_index;
  double best_f1 = -1.0;

  std::size_t fired = points.size();
  std::size_t fired_pos = total_pos;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool first_of_value = i == 0 || points[i].first != points[i - 1].first;
    if (first_of_value) {
      const double threshold = points[i].first;
      const double precision = static_cast<double>(fired_pos) / static_cast<double>(fired);
      const double recall = static_cast<double>(fired_pos) / static_cast<double>(total_pos);
      const double f1 =
          precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
      fit.curve.push_back({threshold, precision, recall});
      if (f1 >= best_f1) {  // >= keeps the highest threshold among ties
        best_f1 = f1;
        fit.model.threshold = threshold;
      }
    }
    fired -= 1;
    if (points[i].second) fired_pos -= 1;
  }
  return fit;
}

void write_pr_curve_csv(const std::filesystem::path& path, std::span<const PRPoint> curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << "threshold,precision,recall\n";
  for (const PRPoint& p : curve) {
    out << format_double(p.threshold) << ',' << format_double(p.precision) << ','
        << format_double(p.recall) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace pumpwatch::models

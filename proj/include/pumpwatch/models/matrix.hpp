#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::models {

/// Dense row-major feature matrix. Models are generic over the feature
/// count; the pipeline always uses the nine FeatureVector columns.
struct FeatureMatrix {
  std::size_t n_features = 0;
  std::vector<double> values;

  std::size_t rows() const { return n_features == 0 ? 0 : values.size() / n_features; }

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features, n_features};
  }

  void push_row(std::span<const double> row) {
    values.insert(values.end(), row.begin(), row.end());
  }

  static FeatureMatrix from_vectors(std::span<const FeatureVector> vectors) {
    FeatureMatrix m;
    m.n_features = FeatureVector::kFeatureCount;
    m.values.reserve(vectors.size() * m.n_features);
    for (const FeatureVector& v : vectors) {
      const auto f = v.features();
      m.values.insert(m.values.end(), f.begin(), f.end());
    }
    return m;
  }
};

inline std::vector<char> labels_of(std::span<const FeatureVector> vectors) {
  std::vector<char> y;
  y.reserve(vectors.size());
  for (const FeatureVector& v : vectors) y.push_back(v.label ? 1 : 0);
  return y;
}

}  // namespace pumpwatch::models

#pragma once

#include <span>
#include <vector>

#include "json.hpp"

#include "pumpwatch/models/matrix.hpp"

namespace pumpwatch::models {

struct LRParams {
  double C = 1.0;  // inverse L2 regularization strength
  std::int32_t max_iterations = 200;
  double tolerance = 1e-8;  // on the gradient max-norm

  void validate() const;

  bool operator==(const LRParams&) const = default;
};

/// Per-feature z-score statistics fitted on the training split. A constant
/// feature keeps stddev 1 so it maps to zero.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const FeatureMatrix& X);
  std::vector<double> apply(std::span<const double> row) const;
};

/// L2-regularized logistic loss and its gradient at theta = [w..., b].
/// The intercept is unpenalized. Exposed for finite-difference checks.
struct Objective {
  double loss = 0.0;
  std::vector<double> grad;
};
Objective logreg_objective(const FeatureMatrix& X, std::span<const char> y, double C,
                           std::span<const double> theta);

class LRModel {
 public:
  /// Standardizes X, then minimizes the objective with BFGS and a
  /// backtracking line search until the gradient max-norm drops below
  /// params.tolerance or max_iterations is hit. Throws on degenerate
  /// labels or a non-finite loss.
  static LRModel train(const FeatureMatrix& X, std::span<const char> y, const LRParams& params);

  /// Probability of the positive class for a raw (unstandardized) row.
  double score(std::span<const double> x) const;
  bool classify(std::span<const double> x) const { return score(x) >= 0.5; }

  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  const Standardizer& standardizer() const { return standardizer_; }
  const LRParams& params() const { return params_; }

  /// Training diagnostics.
  double initial_loss() const { return initial_loss_; }
  double final_loss() const { return final_loss_; }
  double final_grad_norm() const { return final_grad_norm_; }
  bool converged() const { return converged_; }

  nlohmann::json to_json() const;
  static LRModel from_json(const nlohmann::json& j);

 private:
  LRParams params_;
  Standardizer standardizer_;
  std::vector<double> weights_;
  double intercept_ = 0.0;
  double initial_loss_ = 0.0;
  double final_loss_ = 0.0;
  double final_grad_norm_ = 0.0;
  bool converged_ = false;
};

}  // namespace pumpwatch::models

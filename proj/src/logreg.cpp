#include "pumpwatch/models/logreg.hpp"

#include <algorithm>
#include <cmath>

namespace pumpwatch::models {

namespace {

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// log(1 + exp(z)) without overflow.
double log1pexp(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

void LRParams::validate() const {
  if (C <= 0.0) throw Error("C must be positive");
  if (max_iterations < 1) throw Error("max_iterations must be >= 1");
  if (tolerance <= 0.0) throw Error("tolerance must be positive");
}

Standardizer Standardizer::fit(const FeatureMatrix& X) {
  const std::size_t n = X.rows();
  const std::size_t f = X.n_features;
  Standardizer s;
  s.mean.assign(f, 0.0);
  s.stddev.assign(f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = X.row(i);
    for (std::size_t j = 0; j < f; ++j) s.mean[j] += row[j];
  }
  for (double& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = X.row(i);
    for (std::size_t j = 0; j < f; ++j) {
      const double d = row[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (double& v : s.stddev) {
    v = std::sqrt(v / static_cast<double>(n));
    if (v == 0.0) v = 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  std::vector<double> z(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) z[j] = (row[j] - mean[j]) / stddev[j];
  return z;
}

Objective logreg_objective(const FeatureMatrix& X, std::span<const char> y, double C,
                           std::span<const double> theta) {
  const std::size_t n = X.rows();
  const std::size_t f = X.n_features;
  const std::span<const double> w = theta.subspan(0, f);
  const double b = theta[f];

  Objective obj;
  obj.grad.assign(f + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = X.row(i);
    const double z = dot(row, w) + b;
    const double target = y[i] ? 1.0 : 0.0;
    obj.loss += log1pexp(z) - target * z;
    const double r = sigmoid(z) - target;
    for (std::size_t j = 0; j < f; ++j) obj.grad[j] += r * row[j];
    obj.grad[f] += r;
  }
  // Ridge penalty on the weights only.
  for (std::size_t j = 0; j < f; ++j) {
    obj.loss += theta[j] * theta[j] / (2.0 * C);
    obj.grad[j] += theta[j] / C;
  }
  return obj;
}

LRModel LRModel::train(const FeatureMatrix& X, std::span<const char> y, const LRParams& params) {
  params.validate();
  if (X.rows() == 0) throw Error("empty input: no training rows");
  if (X.rows() != y.size()) throw Error("feature/label size mismatch");
  const bool any_pos = std::find(y.begin(), y.end(), char{1}) != y.end();
  const bool any_neg = std::find(y.begin(), y.end(), char{0}) != y.end();
  if (!any_pos || !any_neg) throw Error("degenerate labels: both classes required");

  LRModel model;
  model.params_ = params;
  model.standardizer_ = Standardizer::fit(X);

  FeatureMatrix Z;
  Z.n_features = X.n_features;
  Z.values.reserve(X.values.size());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto z = model.standardizer_.apply(X.row(i));
    Z.push_row(z);
  }

  const std::size_t dim = Z.n_features + 1;
  std::vector<double> theta(dim, 0.0);
  Objective obj = logreg_objective(Z, y, params.C, theta);
  model.initial_loss_ = obj.loss;

  // Dense BFGS; the parameter space is tiny (nine weights + intercept).
  std::vector<double> H(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) H[i * dim + i] = 1.0;

  std::vector<double> direction(dim), theta_next(dim), grad_delta(dim), step(dim), Hy(dim);
  bool converged = false;

  for (std::int32_t iter = 0; iter < params.max_iterations; ++iter) {
    if (!std::isfinite(obj.loss)) throw Error("non-finite loss: check feature scaling");
    if (max_norm(obj.grad) < params.tolerance) {
      converged = true;
      break;
    }

    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += H[i * dim + j] * obj.grad[j];
      direction[i] = -s;
    }
    double descent = dot(direction, obj.grad);
    if (descent >= 0.0) {
      // Curvature went bad; restart from steepest descent.
      std::fill(H.begin(), H.end(), 0.0);
      for (std::size_t d = 0; d < dim; ++d) H[d * dim + d] = 1.0;
      for (std::size_t i = 0; i < dim; ++i) direction[i] = -obj.grad[i];
      descent = dot(direction, obj.grad);
    }

    // Backtracking Armijo line search.
    double alpha = 1.0;
    Objective next;
    bool accepted = false;
    for (int probe = 0; probe < 60; ++probe) {
      for (std::size_t i = 0; i < dim; ++i) theta_next[i] = theta[i] + alpha * direction[i];
      next = logreg_objective(Z, y, params.C, theta_next);
      if (std::isfinite(next.loss) && next.loss <= obj.loss + 1e-4 * alpha * descent) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // cannot make progress at double precision

    for (std::size_t i = 0; i < dim; ++i) {
      step[i] = theta_next[i] - theta[i];
      grad_delta[i] = next.grad[i] - obj.grad[i];
    }
    const double sy = dot(step, grad_delta);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += H[i * dim + j] * grad_delta[j];
        Hy[i] = s;
      }
      const double yHy = dot(grad_delta, Hy);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          H[i * dim + j] += (sy + yHy) * rho * rho * step[i] * step[j] -
                            rho * (Hy[i] * step[j] + step[i] * Hy[j]);
        }
      }
    }

    theta = theta_next;
    obj = next;
  }

  if (max_norm(obj.grad) < params.tolerance) converged = true;

  model.weights_.assign(theta.begin(), theta.end() - 1);
  model.intercept_ = theta.back();
  model.final_loss_ = obj.loss;
  model.final_grad_norm_ = max_norm(obj.grad);
  model.converged_ = converged;
  return model;
}

double LRModel::score(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw Error("dimension mismatch: expected " + std::to_string(weights_.size()) + " features");
  }
  const auto z = standardizer_.apply(x);
  return sigmoid(dot(z, weights_) + intercept_);
}

nlohmann::json LRModel::to_json() const {
  return nlohmann::json{
      {"params", {{"C", params_.C},
                  {"max_iterations", params_.max_iterations},
                  {"tolerance", params_.tolerance}}},
      {"standardizer", {{"mean", standardizer_.mean}, {"stddev", standardizer_.stddev}}},
      {"weights", weights_},
      {"intercept", intercept_},
      {"final_loss", final_loss_},
      {"converged", converged_}};
}

LRModel LRModel::from_json(const nlohmann::json& j) {
  LRModel m;
  const auto& p = j.at("params");
  m.params_.C = p.at("C").get<double>();
  m.params_.max_iterations = p.at("max_iterations").get<std::int32_t>();
  m.params_.tolerance = p.at("tolerance").get<double>();
  m.standardizer_.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
  m.standardizer_.stddev = j.at("standardizer").at("stddev").get<std::vector<double>>();
  m.weights_ = j.at("weights").get<std::vector<double>>();
  m.intercept_ = j.at("intercept").get<double>();
  m.final_loss_ = j.value("final_loss", 0.0);
  m.converged_ = j.value("converged", false);
  return m;
}

}  // namespace pumpwatch::models

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers/oracles.hpp"
#include "pumpwatch/models/logreg.hpp"
#include "pumpwatch/util/rng.hpp"

using namespace pumpwatch;
using namespace pumpwatch::models;
using pumpwatch::testing::close_rel;

namespace {

FeatureMatrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t features) {
  FeatureMatrix m;
  m.n_features = features;
  for (std::size_t i = 0; i < rows * features; ++i) m.values.push_back(rng.uniform(-2.0, 2.0));
  return m;
}

std::vector<char> random_labels(SplitMix64& rng, std::size_t rows) {
  std::vector<char> y;
  for (std::size_t i = 0; i < rows; ++i) y.push_back(rng.next_double() < 0.5 ? 1 : 0);
  if (std::find(y.begin(), y.end(), 1) == y.end()) y[0] = 1;
  if (std::find(y.begin(), y.end(), 0) == y.end()) y[0] = 0;
  return y;
}

}  // namespace

TEST_CASE("logreg objective gradient matches central finite differences") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SplitMix64 rng(seed + 100);
    const std::size_t rows = 5 + rng.below(60);
    const std::size_t features = 1 + rng.below(6);
    const FeatureMatrix X = random_matrix(rng, rows, features);
    const auto y = random_labels(rng, rows);
    const double C = rng.uniform(0.2, 5.0);

    std::vector<double> theta(features + 1);
    for (double& t : theta) t = rng.uniform(-1.0, 1.0);

    const Objective obj = logreg_objective(X, y, C, theta);
    const double h = 1e-6;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      auto plus = theta, minus = theta;
      plus[j] += h;
      minus[j] -= h;
      const double numeric =
          (logreg_objective(X, y, C, plus).loss - logreg_objective(X, y, C, minus).loss) /
          (2.0 * h);
      CHECK(close_rel(obj.grad[j], numeric, 1e-5, 1e-7));
    }
  }
}

TEST_CASE("logreg: labels independent of features give the base-rate intercept") {
  // All-zero features: the optimum is w = 0, b = log(p / (1 - p)).
  FeatureMatrix X;
  X.n_features = 3;
  std::vector<char> y;
  for (int i = 0; i < 100; ++i) {
    X.values.insert(X.values.end(), {0.0, 0.0, 0.0});
    y.push_back(i < 25 ? 1 : 0);
  }
  LRParams params;
  const auto model = LRModel::train(X, y, params);
  for (double w : model.weights()) CHECK(std::abs(w) < 1e-6);
  CHECK(model.intercept() == doctest::Approx(std::log(0.25 / 0.75)).epsilon(1e-5));
  const std::vector<double> x0 = {0.0, 0.0, 0.0};
  CHECK(model.score(x0) == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("logreg: separable 1-D data reaches perfect accuracy with finite weights") {
  FeatureMatrix X;
  X.n_features = 1;
  std::vector<char> y;
  for (int i = 0; i < 20; ++i) {
    X.values.push_back(i < 10 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i);
    y.push_back(i < 10 ? 0 : 1);
  }
  const auto model = LRModel::train(X, y, LRParams{});
  for (std::size_t i = 0; i < X.rows(); ++i) {
    CHECK(model.classify(X.row(i)) == (y[i] != 0));
  }
  CHECK(std::isfinite(model.weights()[0]));

  // Grid-search oracle over (w, b) on the standardized data confirms the
  // optimizer found at least as good a loss.
  Standardizer std_fit = Standardizer::fit(X);
  FeatureMatrix Z;
  Z.n_features = 1;
  for (std::size_t i = 0; i < X.rows(); ++i) Z.push_row(std_fit.apply(X.row(i)));
  double best_grid = 1e300;
  for (double w = -8.0; w <= 8.0; w += 0.05) {
    for (double b = -4.0; b <= 4.0; b += 0.05) {
      const std::vector<double> theta = {w, b};
      best_grid = std::min(best_grid, logreg_objective(Z, y, 1.0, theta).loss);
    }
  }
  CHECK(model.final_loss() <= best_grid + 1e-6);
}

TEST_CASE("logreg: returned optimum satisfies the gradient tolerance") {
  SplitMix64 rng(17);
  const FeatureMatrix X = random_matrix(rng, 200, 4);
  std::vector<char> y;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto row = X.row(i);
    const double z = 0.8 * row[0] - 1.2 * row[2] + 0.2;
    y.push_back(rng.next_double() < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0);
  }
  LRParams params;
  params.tolerance = 1e-8;
  const auto model = LRModel::train(X, y, params);
  CHECK(model.converged());
  CHECK(model.final_grad_norm() < params.tolerance);
  CHECK(model.final_loss() <= model.initial_loss());
}

TEST_CASE("logreg: final loss never exceeds initial loss on random problems") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SplitMix64 rng(seed * 3 + 7);
    const std::size_t rows = 10 + rng.below(150);
    const std::size_t features = 1 + rng.below(8);
    const FeatureMatrix X = random_matrix(rng, rows, features);
    const auto y = random_labels(rng, rows);
    LRParams params;
    params.max_iterations = 3 + static_cast<std::int32_t>(rng.below(100));
    const auto model = LRModel::train(X, y, params);
    CHECK(model.final_loss() <= model.initial_loss());
  }
}

TEST_CASE("logreg: degenerate labels rejected") {
  FeatureMatrix X;
  X.n_features = 1;
  X.values = {1.0, 2.0};
  CHECK_THROWS_AS((void)LRModel::train(X, std::vector<char>{1, 1}, LRParams{}), Error);
}

TEST_CASE("logreg: constant features standardize safely") {
  FeatureMatrix X;
  X.n_features = 2;
  std::vector<char> y;
  for (int i = 0; i < 40; ++i) {
    X.values.push_back(3.0);  // constant
    X.values.push_back(i < 20 ? -1.0 : 1.0);
    y.push_back(i < 20 ? 0 : 1);
  }
  const auto model = LRModel::train(X, y, LRParams{});
  CHECK(std::isfinite(model.final_loss()));
  const std::vector<double> probe = {3.0, 1.0};
  CHECK(model.score(probe) > 0.5);
}

TEST_CASE("logreg: JSON round-trip preserves scoring") {
  SplitMix64 rng(23);
  const FeatureMatrix X = random_matrix(rng, 80, 9);
  const auto y = random_labels(rng, 80);
  const auto model = LRModel::train(X, y, LRParams{});
  const auto restored = LRModel::from_json(model.to_json());
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(model.score(X.row(i)) == restored.score(X.row(i)));
  }
}

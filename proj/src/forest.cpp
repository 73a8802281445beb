#include "pumpwatch/models/forest.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "pumpwatch/util/rng.hpp"

namespace pumpwatch::models {

namespace {

double gini(double pos_weight, double total_weight) {
  const double p = pos_weight / total_weight;
  return 2.0 * p * (1.0 - p);
}

struct GrowContext {
  const FeatureMatrix& X;
  std::span<const char> y;
  const RFParams& params;
  SplitMix64& rng;
  std::vector<TreeNode>& nodes;
  std::vector<double>& importance;  // raw impurity-decrease sums for this tree
  double root_weight = 0.0;
};

double sample_weight(char label, double positive_weight) {
  return label ? positive_weight : 1.0;
}

std::vector<std::int32_t> sample_features(SplitMix64& rng, std::size_t n_features,
                                          std::int32_t per_split) {
  std::vector<std::int32_t> all(n_features);
  std::iota(all.begin(), all.end(), 0);
  if (per_split >= static_cast<std::int32_t>(n_features)) return all;
  for (std::int32_t i = 0; i < per_split; ++i) {
    const std::size_t j = i + rng.below(n_features - i);
    std::swap(all[i], all[j]);
  }
  all.resize(per_split);
  std::sort(all.begin(), all.end());  // tie-break wants ascending evaluation order
  return all;
}

std::int32_t grow_node(GrowContext& ctx, std::vector<std::size_t>& samples, std::int32_t depth) {
  const double w = ctx.params.positive_weight;
  double total = 0.0, pos = 0.0;
  for (std::size_t idx : samples) {
    const double sw = sample_weight(ctx.y[idx], w);
    total += sw;
    if (ctx.y[idx]) pos += sw;
  }

  auto make_leaf = [&]() {
    TreeNode leaf;
    leaf.is_leaf = true;
    leaf.leaf_score = pos / total;
    ctx.nodes.push_back(leaf);
    return static_cast<std::int32_t>(ctx.nodes.size() - 1);
  };

  const bool pure = pos == 0.0 || pos == total;
  if (depth >= ctx.params.max_depth || pure ||
      static_cast<std::int64_t>(samples.size()) < 2 * ctx.params.min_samples_leaf) {
    return make_leaf();
  }

  const auto candidates = sample_features(ctx.rng, ctx.X.n_features, ctx.params.features_per_split);
  const SplitChoice choice =
      best_gini_split(ctx.X, ctx.y, samples, candidates, ctx.params.min_samples_leaf, w);
  if (!choice.found) return make_leaf();

  ctx.importance[choice.feature] += (total / ctx.root_weight) * choice.gain;

  std::vector<std::size_t> left, right;
  left.reserve(samples.size());
  right.reserve(samples.size());
  for (std::size_t idx : samples) {
    if (ctx.X.row(idx)[choice.feature] < choice.threshold) {
      left.push_back(idx);
    } else {
      right.push_back(idx);
    }
  }
  samples.clear();
  samples.shrink_to_fit();

  TreeNode node;
  node.is_leaf = false;
  node.feature = choice.feature;
  node.threshold = choice.threshold;
  ctx.nodes.push_back(node);
  const std::int32_t self = static_cast<std::int32_t>(ctx.nodes.size() - 1);
  const std::int32_t left_idx = grow_node(ctx, left, depth + 1);
  const std::int32_t right_idx = grow_node(ctx, right, depth + 1);
  ctx.nodes[self].left = left_idx;
  ctx.nodes[self].right = right_idx;
  return self;
}

void grow_tree(const FeatureMatrix& X, std::span<const char> y, const RFParams& params,
               std::uint64_t tree_seed, DecisionTree& tree, std::vector<double>& importance) {
  SplitMix64 rng(tree_seed);
  const std::size_t n = X.rows();

  std::vector<std::size_t> samples;
  samples.reserve(n);
  if (params.bootstrap) {
    for (std::size_t i = 0; i < n; ++i) samples.push_back(rng.below(n));
  } else {
    samples.resize(n);
    std::iota(samples.begin(), samples.end(), std::size_t{0});
  }

  importance.assign(X.n_features, 0.0);
  GrowContext ctx{X, y, params, rng, tree.nodes, importance};
  for (std::size_t idx : samples) ctx.root_weight += sample_weight(y[idx], params.positive_weight);
  tree.nodes.clear();
  grow_node(ctx, samples, 0);
}

}  // namespace

void RFParams::validate(std::size_t n_features) const {
  if (n_trees < 1) throw Error("n_trees must be >= 1");
  if (max_depth < 1) throw Error("max_depth must be >= 1");
  if (min_samples_leaf < 1) throw Error("min_samples_leaf must be >= 1");
  if (features_per_split < 1 ||
      features_per_split > static_cast<std::int32_t>(n_features)) {
    throw Error("features_per_split must be in [1, n_features]");
  }
  if (positive_weight <= 0.0) throw Error("positive_weight must be positive");
}

double DecisionTree::predict(std::span<const double> x) const {
  std::int32_t i = 0;
  while (!nodes[i].is_leaf) {
    i = x[nodes[i].feature] < nodes[i].threshold ? nodes[i].left : nodes[i].right;
  }
  return nodes[i].leaf_score;
}

SplitChoice best_gini_split(const FeatureMatrix& X, std::span<const char> y,
                            std::span<const std::size_t> sample_indices,
                            std::span<const std::int32_t> candidate_features,
                            std::int32_t min_samples_leaf, double positive_weight) {
  const std::size_t n = sample_indices.size();
  double total_weight = 0.0, total_pos = 0.0;
  for (std::size_t idx : sample_indices) {
    const double sw = sample_weight(y[idx], positive_weight);
    total_weight += sw;
    if (y[idx]) total_pos += sw;
  }
  const double parent = gini(total_pos, total_weight);

  SplitChoice best;
  std::vector<std::pair<double, char>> column(n);

  for (std::int32_t f : candidate_features) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = sample_indices[i];
      column[i] = {X.row(idx)[f], y[idx]};
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double left_weight = 0.0, left_pos = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double sw = sample_weight(column[i].second, positive_weight);
      left_weight += sw;
      if (column[i].second) left_pos += sw;

      if (column[i].first == column[i + 1].first) continue;
      const std::int64_t left_count = static_cast<std::int64_t>(i + 1);
      const std::int64_t right_count = static_cast<std::int64_t>(n) - left_count;
      if (left_count < min_samples_leaf || right_count < min_samples_leaf) continue;

      const double right_weight = total_weight - left_weight;
      const double right_pos = total_pos - left_pos;
      const double children = (left_weight / total_weight) * gini(left_pos, left_weight) +
                              (right_weight / total_weight) * gini(right_pos, right_weight);
      const double gain = parent - children;
      if (gain <= 0.0) continue;

      double threshold = (column[i].first + column[i + 1].first) / 2.0;
      // The midpoint can round onto the left value; push it to the right
      // value so the < threshold partition matches the counted one.
      if (!(threshold > column[i].first)) threshold = column[i + 1].first;

      if (gain > best.gain) {
        best = {true, f, threshold, gain};
      }
      // Equal gains keep the earlier candidate: features are evaluated in
      // ascending order and thresholds ascend within a feature.
    }
  }
  return best;
}

ForestModel ForestModel::train(const FeatureMatrix& X, std::span<const char> y,
                               const RFParams& params, unsigned n_threads) {
  if (X.rows() == 0) throw Error("empty input: no training rows");
  if (X.rows() != y.size()) throw Error("feature/label size mismatch");
  params.validate(X.n_features);

  const bool any_pos = std::find(y.begin(), y.end(), char{1}) != y.end();
  const bool any_neg = std::find(y.begin(), y.end(), char{0}) != y.end();
  if (!any_pos || !any_neg) throw Error("degenerate labels: both classes required");

  ForestModel model;
  model.params_ = params;
  model.n_features_ = X.n_features;
  model.trees_.resize(params.n_trees);

  std::vector<std::vector<double>> per_tree_importance(params.n_trees);

  auto build_range = [&](std::int32_t begin, std::int32_t end) {
    for (std::int32_t t = begin; t < end; ++t) {
      grow_tree(X, y, params, params.seed + static_cast<std::uint64_t>(t), model.trees_[t],
                per_tree_importance[t]);
    }
  };

  if (n_threads <= 1 || params.n_trees == 1) {
    build_range(0, params.n_trees);
  } else {
    const unsigned workers = std::min<unsigned>(n_threads, params.n_trees);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int32_t per = (params.n_trees + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::int32_t begin = static_cast<std::int32_t>(w) * per;
      const std::int32_t end = std::min(params.n_trees, begin + per);
      if (begin >= end) break;
      pool.emplace_back(build_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  // Reduce importances in tree order so the result does not depend on
  // scheduling.
  model.importances_.assign(X.n_features, 0.0);
  for (const auto& imp : per_tree_importance) {
    for (std::size_t f = 0; f < imp.size(); ++f) model.importances_[f] += imp[f];
  }
  for (double& v : model.importances_) v /= params.n_trees;
  const double sum = std::accumulate(model.importances_.begin(), model.importances_.end(), 0.0);
  if (sum > 0.0) {
    for (double& v : model.importances_) v /= sum;
  }
  return model;
}

double ForestModel::score(std::span<const double> x) const {
  if (x.size() != n_features_) throw Error("dimension mismatch: expected " +
                                           std::to_string(n_features_) + " features");
  double sum = 0.0;
  for (const DecisionTree& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

namespace {

nlohmann::json node_to_json(const std::vector<TreeNode>& nodes, std::int32_t i) {
  const TreeNode& n = nodes[i];
  if (n.is_leaf) return nlohmann::json{{"leaf", n.leaf_score}};
  return nlohmann::json{{"feature", n.feature},
                        {"threshold", n.threshold},
                        {"left", node_to_json(nodes, n.left)},
                        {"right", node_to_json(nodes, n.right)}};
}

std::int32_t node_from_json(const nlohmann::json& j, std::vector<TreeNode>& nodes) {
  TreeNode n;
  if (j.contains("leaf")) {
    n.is_leaf = true;
    n.leaf_score = j.at("leaf").get<double>();
    nodes.push_back(n);
    return static_cast<std::int32_t>(nodes.size() - 1);
  }
  n.is_leaf = false;
  n.feature = j.at("feature").get<std::int32_t>();
  n.threshold = j.at("threshold").get<double>();
  nodes.push_back(n);
  const std::int32_t self = static_cast<std::int32_t>(nodes.size() - 1);
  const std::int32_t left = node_from_json(j.at("left"), nodes);
  const std::int32_t right = node_from_json(j.at("right"), nodes);
  nodes[self].left = left;
  nodes[self].right = right;
  return self;
}

}  // namespace

nlohmann::json ForestModel::to_json() const {
  nlohmann::json j;
  j["params"] = {{"n_trees", params_.n_trees},
                 {"min_samples_leaf", params_.min_samples_leaf},
                 {"max_depth", params_.max_depth},
                 {"features_per_split", params_.features_per_split},
                 {"seed", params_.seed},
                 {"bootstrap", params_.bootstrap},
                 {"positive_weight", params_.positive_weight}};
  j["n_features"] = n_features_;
  j["importances"] = importances_;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const DecisionTree& t : trees_) trees.push_back(node_to_json(t.nodes, 0));
  return j;
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  ForestModel model;
  const auto& p = j.at("params");
  model.params_.n_trees = p.at("n_trees").get<std::int32_t>();
  model.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::int32_t>();
  model.params_.max_depth = p.at("max_depth").get<std::int32_t>();
  model.params_.features_per_split = p.at("features_per_split").get<std::int32_t>();
  model.params_.seed = p.at("seed").get<std::uint64_t>();
  model.params_.bootstrap = p.at("bootstrap").get<bool>();
  model.params_.positive_weight = p.value("positive_weight", 1.0);
  model.n_features_ = j.at("n_features").get<std::size_t>();
  model.importances_ = j.at("importances").get<std::vector<double>>();
  for (const auto& tj : j.at("trees")) {
    DecisionTree t;
    node_from_json(tj, t.nodes);
    model.trees_.push_back(std::move(t));
  }
  return model;
}

}  // namespace pumpwatch::models

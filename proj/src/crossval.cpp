#include "pumpwatch/eval/crossval.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "pumpwatch/util/numfmt.hpp"
#include "pumpwatch/util/rng.hpp"

namespace pumpwatch::eval {

std::vector<std::vector<std::size_t>> assign_folds(std::size_t n_events, std::int32_t k,
                                                   std::uint64_t seed) {
  std::vector<std::size_t> order(n_events);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = n_events; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n_events; ++i) folds[i % k].push_back(order[i]);
  return folds;
}

namespace {

FoldMetrics evaluate_fold(std::span<const FeatureVector> train,
                          std::span<const FeatureVector> test, const models::ModelSpec& spec,
                          unsigned n_threads) {
  PipelineConfig config;  // chunking is irrelevant to the model math here
  const auto trained = models::train_artifact(spec, train, config, "", n_threads);

  std::vector<char> predicted, actual;
  predicted.reserve(test.size());
  actual.reserve(test.size());
  for (const FeatureVector& v : test) {
    const auto features = v.features();
    predicted.push_back(trained.artifact.positive(features) ? 1 : 0);
    actual.push_back(v.label ? 1 : 0);
  }

  FoldMetrics fm;
  fm.counts = count_confusion(predicted, actual);
  fm.metrics = fm.counts.metrics();
  return fm;
}

}  // namespace

CVReport kfold_cv(std::span<const EventDataset> datasets, const models::ModelSpec& spec,
                  std::int32_t k, std::uint64_t seed, bool event_grouped, unsigned n_threads) {
  if (k < 2) throw Error("k must be >= 2");
  if (static_cast<std::int32_t>(datasets.size()) < k) {
    throw Error("too few events: " + std::to_string(datasets.size()) + " for k=" +
                std::to_string(k));
  }

  CVReport report;
  report.k = k;
  report.seed = seed;
  report.event_grouped = event_grouped;

  if (event_grouped) {
    const auto folds = assign_folds(datasets.size(), k, seed);
    for (std::int32_t f = 0; f < k; ++f) {
      std::vector<char> in_test(datasets.size(), 0);
      for (std::size_t e : folds[f]) in_test[e] = 1;

      std::vector<FeatureVector> train, test;
      for (std::size_t e = 0; e < datasets.size(); ++e) {
        auto& dst = in_test[e] ? test : train;
        dst.insert(dst.end(), datasets[e].vectors.begin(), datasets[e].vectors.end());
      }
      FoldMetrics fm = evaluate_fold(train, test, spec, n_threads);
      fm.test_events = folds[f];
      report.folds.push_back(std::move(fm));
    }
  } else {
    std::vector<FeatureVector> pool;
    for (const EventDataset& d : datasets) {
      pool.insert(pool.end(), d.vectors.begin(), d.vectors.end());
    }
    const auto folds = assign_folds(pool.size(), k, seed);
    for (std::int32_t f = 0; f < k; ++f) {
      std::vector<char> in_test(pool.size(), 0);
      for (std::size_t i : folds[f]) in_test[i] = 1;
      std::vector<FeatureVector> train, test;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        (in_test[i] ? test : train).push_back(pool[i]);
      }
      report.folds.push_back(evaluate_fold(train, test, spec, n_threads));
    }
  }

  for (const FoldMetrics& fm : report.folds) {
    report.mean.precision += fm.metrics.precision;
    report.mean.recall += fm.metrics.recall;
    report.mean.f1 += fm.metrics.f1;
  }
  report.mean.precision /= k;
  report.mean.recall /= k;
  report.mean.f1 /= k;
  return report;
}

nlohmann::json cv_report_to_json(const CVReport& report, const PipelineConfig& config) {
  nlohmann::json j;
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["event_grouped"] = report.event_grouped;
  j["config"] = {{"chunk_seconds", config.chunk_seconds},
                 {"window_seconds", config.window_seconds},
                 {"cooldown_seconds", config.cooldown_seconds}};
  auto& folds = j["folds"] = nlohmann::json::array();
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const FoldMetrics& fm = report.folds[f];
    folds.push_back({{"fold", f},
                     {"precision", fm.metrics.precision},
                     {"recall", fm.metrics.recall},
                     {"f1", fm.metrics.f1},
                     {"tp", fm.counts.tp},
                     {"fp", fm.counts.fp},
                     {"fn", fm.counts.fn},
                     {"tn", fm.counts.tn},
                     {"test_events", fm.test_events}});
  }
  j["mean"] = {{"precision", report.mean.precision},
               {"recall", report.mean.recall},
               {"f1", report.mean.f1}};
  return j;
}

void write_cv_summary_csv(const std::filesystem::path& path, const CVReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << "fold,precision,recall,f1\n";
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const PRF& m = report.folds[f].metrics;
    out << f << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
        << format_double(m.f1) << '\n';
  }
  out << "mean," << format_double(report.mean.precision) << ','
      << format_double(report.mean.recall) << ',' << format_double(report.mean.f1) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace pumpwatch::eval

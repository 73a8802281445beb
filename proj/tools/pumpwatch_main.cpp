#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pumpwatch/core/serde.hpp"
#include "pumpwatch/core/validate.hpp"
#include "pumpwatch/eval/crossval.hpp"
#include "pumpwatch/eval/kamps_eval.hpp"
#include "pumpwatch/eval/scan.hpp"
#include "pumpwatch/featurize/chunks.hpp"
#include "pumpwatch/featurize/features.hpp"
#include "pumpwatch/featurize/rush.hpp"
#include "pumpwatch/ingest/client.hpp"
#include "pumpwatch/ingest/dataset.hpp"
#include "pumpwatch/models/artifact.hpp"
#include "pumpwatch/replay/engine.hpp"
#include "pumpwatch/replay/inject.hpp"

namespace pw = pumpwatch;

namespace {

/// --config is honored before the main parse so its values become the
/// defaults that explicit flags then override.
pw::PipelineConfig preload_config(int argc, char** argv) {
  pw::PipelineConfig config;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string_view(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw pw::Error(std::string("cannot open config file: ") + argv[i + 1]);
      pw::json j;
      in >> j;
      config = j.get<pw::PipelineConfig>();
      break;
    }
  }
  return config;
}

struct PipelineFlags {
  CLI::Option* chunk = nullptr;
  CLI::Option* window = nullptr;
  CLI::Option* cooldown = nullptr;
  CLI::Option* exclusive = nullptr;

  bool any_set() const {
    return chunk->count() || window->count() || cooldown->count() || exclusive->count();
  }
};

PipelineFlags add_pipeline_flags(CLI::App* cmd, pw::PipelineConfig& config, bool& exclusive_window) {
  PipelineFlags flags;
  flags.chunk = cmd->add_option("--chunk-seconds", config.chunk_seconds, "Chunk size s in seconds")
                    ->capture_default_str();
  flags.window =
      cmd->add_option("--window-seconds", config.window_seconds, "Moving window w in seconds")
          ->capture_default_str();
  flags.cooldown = cmd->add_option("--cooldown-seconds", config.cooldown_seconds,
                                   "Alert suppression interval in seconds")
                       ->capture_default_str();
  flags.exclusive = cmd->add_flag("--window-excludes-current", exclusive_window,
                                  "Score each chunk against the window strictly before it");
  cmd->add_option("--config", "JSON config file with the pipeline fields (flags override)");
  return flags;
}

void add_client_flags(CLI::App* cmd, pw::ingest::ClientConfig& cc) {
  cmd->add_option("--base-url", cc.base_url, "Exchange REST base URL")->capture_default_str();
  cmd->add_option("--endpoint", cc.endpoint_path, "Trades endpoint path")->capture_default_str();
  cmd->add_option("--page-size", cc.page_size, "Rows per page")->capture_default_str();
  cmd->add_option("--rpm", cc.requests_per_minute, "Requests-per-minute cap")
      ->capture_default_str();
  cmd->add_option("--retries", cc.max_retries, "Transient-failure retry budget")
      ->capture_default_str();
  cmd->add_option("--backoff-ms", cc.backoff_initial_ms, "Initial retry backoff")
      ->capture_default_str();
}

std::vector<pw::FeatureVector> featurize_trades(const std::vector<pw::TradeRecord>& trades,
                                                const pw::PipelineConfig& config,
                                                std::span<const pw::PumpEvent> events) {
  const auto rush = pw::featurize::infer_rush_orders(trades);
  const auto series = pw::featurize::chunk_series(trades, rush, config);
  auto vectors = pw::featurize::moving_features(series, config);
  const auto outcome = pw::featurize::label_chunks(vectors, events, config);
  for (const pw::PumpEvent& skipped : outcome.skipped) {
    std::cerr << "warning: event " << skipped.symbol << " @ " << skipped.signal_ts_ms
              << " falls outside the series; skipped\n";
  }
  return vectors;
}

pw::models::ModelSpec parse_model_spec(const std::string& name, std::uint64_t seed) {
  pw::models::ModelSpec spec;
  spec.type = pw::models::model_type_from_name(name);
  spec.rf.seed = seed;
  return spec;
}

int run(int argc, char** argv) {
  CLI::App app{"Streaming pump-and-dump detection pipeline"};
  app.require_subcommand(1);

  pw::PipelineConfig base_config = preload_config(argc, argv);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Deterministic seed")->capture_default_str();

  // fetch ------------------------------------------------------------
  auto* fetch = app.add_subcommand("fetch", "Download historical trades for one symbol");
  struct {
    std::string symbol, out;
    std::int64_t start_ms = 0, end_ms = 0;
    std::int64_t resume_from_id = -1;
    pw::ingest::ClientConfig client;
  } fetch_opts;
  fetch->add_option("--symbol", fetch_opts.symbol)->required();
  fetch->add_option("--start-ms", fetch_opts.start_ms, "Inclusive start, epoch ms")->required();
  fetch->add_option("--end-ms", fetch_opts.end_ms, "Exclusive end, epoch ms")->required();
  fetch->add_option("--out", fetch_opts.out, "Output trades CSV")->required();
  fetch->add_option("--resume-from-id", fetch_opts.resume_from_id,
                    "Resume pagination at this trade id");
  add_client_flags(fetch, fetch_opts.client);
  fetch->callback([&] {
    pw::ingest::ExchangeClient client(fetch_opts.client);
    std::optional<std::int64_t> resume;
    if (fetch_opts.resume_from_id >= 0) resume = fetch_opts.resume_from_id;
    try {
      const auto trades =
          client.fetch_trades(fetch_opts.symbol, fetch_opts.start_ms, fetch_opts.end_ms, resume);
      pw::ingest::write_trades_csv(fetch_opts.out, trades);
      std::cout << "fetched " << trades.size() << " trades -> " << fetch_opts.out << "\n";
    } catch (const pw::ingest::FetchError& e) {
      // Persist what arrived plus a checkpoint so the fetch can resume.
      pw::ingest::write_trades_csv(fetch_opts.out + ".partial", e.partial);
      if (e.checkpoint) {
        pw::json cp{{"kind", pw::ingest::fetch_error_kind_name(e.kind)},
                    {"message", e.what()},
                    {"next_from_id", e.checkpoint->next_from_id},
                    {"last_ts_ms", e.checkpoint->last_ts_ms},
                    {"fetched", e.checkpoint->fetched}};
        std::ofstream cp_out(fetch_opts.out + ".checkpoint.json");
        cp_out << cp.dump(2) << '\n';
      }
      throw;
    }
  });

  // dataset ----------------------------------------------------------
  auto* dataset = app.add_subcommand("dataset", "Build per-event trade files from an events CSV");
  struct {
    std::string events, out_dir;
    std::int32_t days_before = 7, days_after = 7;
    pw::ingest::ClientConfig client;
  } dataset_opts;
  dataset->add_option("--events", dataset_opts.events, "Events CSV")->required();
  dataset->add_option("--out-dir", dataset_opts.out_dir, "Dataset directory")->required();
  dataset->add_option("--days-before", dataset_opts.days_before)->capture_default_str();
  dataset->add_option("--days-after", dataset_opts.days_after)->capture_default_str();
  add_client_flags(dataset, dataset_opts.client);
  dataset->callback([&] {
    const auto events = pw::ingest::read_events_csv(dataset_opts.events);
    const auto result = pw::ingest::build_event_dataset(events, dataset_opts.client,
                                                        dataset_opts.out_dir,
                                                        dataset_opts.days_before,
                                                        dataset_opts.days_after);
    result.manifest.save(std::filesystem::path(dataset_opts.out_dir) / "manifest.json");
    std::cout << "built " << result.manifest.files.size() << " trade files for "
              << events.size() << " events\n";
    for (const std::string& err : result.errors) std::cerr << "error: " << err << "\n";
    if (!result.errors.empty()) throw pw::Error("dataset build finished with failures");
  });

  // featurize ---------------------------------------------------------
  auto* featurize = app.add_subcommand("featurize", "Trade file -> labeled feature CSV");
  struct {
    std::string trades, out, events, symbol;
    pw::PipelineConfig config;
    bool exclusive = false;
  } feat_opts;
  feat_opts.config = base_config;
  featurize->add_option("--trades", feat_opts.trades)->required();
  featurize->add_option("--out", feat_opts.out)->required();
  auto* feat_events = featurize->add_option("--events", feat_opts.events, "Events CSV for labels");
  featurize->add_option("--symbol", feat_opts.symbol, "Label only this symbol's events")
      ->needs(feat_events);
  add_pipeline_flags(featurize, feat_opts.config, feat_opts.exclusive);
  featurize->callback([&] {
    if (feat_opts.exclusive) feat_opts.config.window_includes_current = false;
    const auto trades = pw::ingest::read_trades_csv(feat_opts.trades);
    std::vector<pw::PumpEvent> events;
    if (!feat_opts.events.empty()) {
      for (auto& e : pw::ingest::read_events_csv(feat_opts.events)) {
        if (feat_opts.symbol.empty() || e.symbol == feat_opts.symbol) events.push_back(std::move(e));
      }
    }
    const auto vectors = featurize_trades(trades, feat_opts.config, events);
    pw::featurize::write_feature_csv(feat_opts.out, vectors);
    std::cout << "wrote " << vectors.size() << " feature vectors -> " << feat_opts.out << "\n";
  });

  // train --------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Fit a detector on feature files");
  struct {
    std::vector<std::string> features;
    std::string model = "rf", out, model_id, pr_curve_out;
    unsigned threads = 1;
    pw::PipelineConfig config;
    bool exclusive = false;
    pw::models::RFParams rf;
    pw::models::LRParams lr;
  } train_opts;
  train_opts.config = base_config;
  train->add_option("--features", train_opts.features, "Feature CSV (repeatable)")->required();
  train->add_option("--model", train_opts.model, "rf | logreg | threshold")
      ->capture_default_str();
  train->add_option("--out", train_opts.out, "Model artifact JSON")->required();
  train->add_option("--model-id", train_opts.model_id, "Identifier stamped on alerts");
  train->add_option("--threads", train_opts.threads, "Training threads")->capture_default_str();
  train->add_option("--trees", train_opts.rf.n_trees)->capture_default_str();
  train->add_option("--min-samples-leaf", train_opts.rf.min_samples_leaf)->capture_default_str();
  train->add_option("--max-depth", train_opts.rf.max_depth)->capture_default_str();
  train->add_option("--features-per-split", train_opts.rf.features_per_split)
      ->capture_default_str();
  train->add_option("--positive-weight", train_opts.rf.positive_weight,
                    "Positive-class weight (1 = raw labels)")
      ->capture_default_str();
  train->add_option("--l2-c", train_opts.lr.C, "Inverse regularization strength")
      ->capture_default_str();
  train->add_option("--pr-curve-out", train_opts.pr_curve_out,
                    "Write the train PR curve CSV (threshold model)");
  add_pipeline_flags(train, train_opts.config, train_opts.exclusive);
  train->callback([&] {
    if (train_opts.exclusive) train_opts.config.window_includes_current = false;
    std::vector<pw::FeatureVector> vectors;
    for (const std::string& path : train_opts.features) {
      auto part = pw::featurize::read_feature_csv(path);
      vectors.insert(vectors.end(), part.begin(), part.end());
    }
    auto spec = parse_model_spec(train_opts.model, seed);
    spec.rf = train_opts.rf;
    spec.rf.seed = seed;
    spec.lr = train_opts.lr;
    const auto trained = pw::models::train_artifact(spec, vectors, train_opts.config,
                                                    train_opts.model_id, train_opts.threads);
    trained.artifact.save(train_opts.out);
    if (!train_opts.pr_curve_out.empty() && trained.pr_curve) {
      pw::models::write_pr_curve_csv(train_opts.pr_curve_out, *trained.pr_curve);
    }
    std::cout << "trained " << train_opts.model << " on " << vectors.size() << " vectors -> "
              << train_opts.out << "\n";
  });

  // eval ----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Cross-validated metrics over a dataset");
  struct {
    std::string manifest, dataset_dir, model = "rf", out, csv_out;
    std::int32_t k = 10;
    bool chunk_random = false;
    unsigned threads = 1;
    pw::PipelineConfig config;
    bool exclusive = false;
  } eval_opts;
  eval_opts.config = base_config;
  eval->add_option("--manifest", eval_opts.manifest)->required();
  eval->add_option("--dataset-dir", eval_opts.dataset_dir)->required();
  eval->add_option("--model", eval_opts.model,
                   "rf | logreg | threshold | kamps-initial | kamps-balanced | kamps-strict")
      ->capture_default_str();
  eval->add_option("--k", eval_opts.k, "Fold count")->capture_default_str();
  eval->add_flag("--chunk-random", eval_opts.chunk_random,
                 "Chunk-random folds instead of event-grouped");
  eval->add_option("--out", eval_opts.out, "Metrics report JSON")->required();
  eval->add_option("--csv-out", eval_opts.csv_out, "Metrics summary CSV");
  eval->add_option("--threads", eval_opts.threads)->capture_default_str();
  add_pipeline_flags(eval, eval_opts.config, eval_opts.exclusive);
  eval->callback([&] {
    if (eval_opts.exclusive) eval_opts.config.window_includes_current = false;
    const auto manifest = pw::ingest::DatasetManifest::load(eval_opts.manifest);

    if (eval_opts.model.rfind("kamps-", 0) == 0) {
      pw::models::KampsConfig kc;
      const std::string preset = eval_opts.model.substr(6);
      if (preset == "initial") kc = pw::models::KampsConfig::Initial();
      else if (preset == "balanced") kc = pw::models::KampsConfig::Balanced();
      else if (preset == "strict") kc = pw::models::KampsConfig::Strict();
      else throw pw::Error("unknown preset: " + eval_opts.model);

      std::vector<pw::eval::EventTrades> data;
      for (const pw::PumpEvent& e : manifest.events) {
        data.push_back({e, pw::ingest::extract_core_days(manifest, e, eval_opts.dataset_dir)});
      }
      const auto result = pw::eval::evaluate_kamps(data, kc);
      pw::json j{{"model", eval_opts.model},
                 {"precision", result.metrics.precision},
                 {"recall", result.metrics.recall},
                 {"f1", result.metrics.f1},
                 {"tp", result.counts.tp},
                 {"fp", result.counts.fp},
                 {"fn", result.counts.fn},
                 {"tn", result.counts.tn}};
      std::ofstream out(eval_opts.out);
      out << j.dump(2) << '\n';
      std::cout << "kamps " << preset << ": precision " << result.metrics.precision << " recall "
                << result.metrics.recall << " f1 " << result.metrics.f1 << "\n";
      return;
    }

    std::vector<pw::eval::EventDataset> datasets;
    for (const pw::PumpEvent& e : manifest.events) {
      const auto trades = pw::ingest::extract_core_days(manifest, e, eval_opts.dataset_dir);
      pw::eval::EventDataset d;
      d.event = e;
      d.vectors = featurize_trades(trades, eval_opts.config, std::span(&e, 1));
      datasets.push_back(std::move(d));
    }
    const auto spec = parse_model_spec(eval_opts.model, seed);
    const auto report = pw::eval::kfold_cv(datasets, spec, eval_opts.k, seed,
                                           !eval_opts.chunk_random, eval_opts.threads);
    std::ofstream out(eval_opts.out);
    out << pw::eval::cv_report_to_json(report, eval_opts.config).dump(2) << '\n';
    if (!eval_opts.csv_out.empty()) pw::eval::write_cv_summary_csv(eval_opts.csv_out, report);
    std::cout << "k=" << eval_opts.k << " mean precision " << report.mean.precision << " recall "
              << report.mean.recall << " f1 " << report.mean.f1 << "\n";
  });

  // replay ----------------------------------------------------------------
  auto* replay = app.add_subcommand("replay", "Stream a trade file through a trained detector");
  struct {
    std::string trades, model, out, symbol = "UNKNOWN";
    pw::PipelineConfig config;
    bool exclusive = false;
  } replay_opts;
  replay_opts.config = base_config;
  replay->add_option("--trades", replay_opts.trades)->required();
  replay->add_option("--model", replay_opts.model, "Model artifact JSON")->required();
  replay->add_option("--out", replay_opts.out, "Alert JSONL output")->required();
  replay->add_option("--symbol", replay_opts.symbol)->capture_default_str();
  const PipelineFlags replay_flags =
      add_pipeline_flags(replay, replay_opts.config, replay_opts.exclusive);
  replay->callback([&] {
    const auto artifact = pw::models::ModelArtifact::load(replay_opts.model);
    // Flags given explicitly must agree with the artifact; otherwise the
    // artifact's own config drives the replay.
    pw::PipelineConfig config = artifact.config;
    if (replay_flags.chunk->count()) config.chunk_seconds = replay_opts.config.chunk_seconds;
    if (replay_flags.window->count()) config.window_seconds = replay_opts.config.window_seconds;
    if (replay_flags.cooldown->count()) {
      config.cooldown_seconds = replay_opts.config.cooldown_seconds;
    }
    if (replay_flags.exclusive->count()) config.window_includes_current = !replay_opts.exclusive;
    const auto alerts =
        pw::replay::replay_detect(replay_opts.trades, artifact, config, replay_opts.symbol);
    std::ofstream out(replay_opts.out);
    if (!out) throw pw::Error("cannot open for writing: " + replay_opts.out);
    for (const pw::DetectionAlert& a : alerts) out << pw::alert_to_jsonl(a) << '\n';
    std::cout << alerts.size() << " alerts -> " << replay_opts.out << "\n";
  });

  // scan --------------------------------------------------------------------
  auto* scan = app.add_subcommand("scan", "Long-range suspect-event scan over a dataset");
  struct {
    std::string manifest, dataset_dir, model, out;
  } scan_opts;
  scan->add_option("--manifest", scan_opts.manifest)->required();
  scan->add_option("--dataset-dir", scan_opts.dataset_dir)->required();
  scan->add_option("--model", scan_opts.model)->required();
  scan->add_option("--out", scan_opts.out, "Suspects report JSON")->required();
  scan->callback([&] {
    const auto manifest = pw::ingest::DatasetManifest::load(scan_opts.manifest);
    const auto artifact = pw::models::ModelArtifact::load(scan_opts.model);
    std::vector<pw::eval::SymbolSeries> series;
    for (const auto& file : manifest.files) {
      series.push_back({file.symbol, pw::ingest::read_trades_csv(
                                         std::filesystem::path(scan_opts.dataset_dir) /
                                         file.filename)});
    }
    const auto report = pw::eval::scan_suspects(artifact, series, manifest.events);

    std::vector<pw::DetectionAlert> all;
    all.insert(all.end(), report.matched.begin(), report.matched.end());
    all.insert(all.end(), report.in_core.begin(), report.in_core.end());
    all.insert(all.end(), report.suspects.begin(), report.suspects.end());
    const auto latency = pw::eval::detection_latency(all, manifest.events, artifact.config);

    pw::json j = pw::eval::scan_report_to_json(report);
    auto& lat = j["event_latency"] = pw::json::array();
    for (const auto& el : latency) {
      pw::json entry{{"symbol", el.event.symbol}, {"signal_ts_ms", el.event.signal_ts_ms}};
      if (el.latency_seconds) {
        entry["latency_seconds"] = *el.latency_seconds;
      } else {
        entry["missed"] = true;
      }
      lat.push_back(std::move(entry));
    }
    std::ofstream out(scan_opts.out);
    out << j.dump(2) << '\n';
    std::cout << report.suspects.size() << " suspects, " << report.matched.size()
              << " matched known events -> " << scan_opts.out << "\n";
  });

  // inject ----------------------------------------------------------------
  auto* inject = app.add_subcommand("inject", "Insert a synthetic buy burst into a trade file");
  struct {
    std::string trades, out;
    pw::replay::InjectParams params;
    pw::PipelineConfig config;
    bool exclusive = false;
  } inject_opts;
  inject_opts.config = base_config;
  inject->add_option("--trades", inject_opts.trades)->required();
  inject->add_option("--out", inject_opts.out)->required();
  inject->add_option("--at-ms", inject_opts.params.at_ms, "Injection time, epoch ms")->required();
  inject->add_option("--n-rush", inject_opts.params.n_rush)->capture_default_str();
  inject->add_option("--scale", inject_opts.params.volume_scale,
                     "Per-order volume as a multiple of the median chunk volume")
      ->capture_default_str();
  add_pipeline_flags(inject, inject_opts.config, inject_opts.exclusive);
  inject->callback([&] {
    if (inject_opts.exclusive) inject_opts.config.window_includes_current = false;
    inject_opts.params.seed = seed;
    const auto base = pw::ingest::read_trades_csv(inject_opts.trades);
    const auto modified = pw::replay::inject_pump(base, inject_opts.params, inject_opts.config);
    pw::ingest::write_trades_csv(inject_opts.out, std::span<const pw::TradeRecord>(modified));
    std::cout << "injected " << (modified.size() - base.size()) << " trades -> "
              << inject_opts.out << "\n";
  });

  // validate ----------------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "Check a trade file's series invariants");
  struct {
    std::string trades;
  } validate_opts;
  validate->add_option("--trades", validate_opts.trades)->required();
  validate->callback([&] {
    const auto trades = pw::ingest::read_trades_csv(validate_opts.trades);
    const auto report = pw::validate_trade_series(trades);
    for (const auto& v : report.violations) {
      std::cout << pw::violation_kind_name(v.kind) << " at record " << v.index << ": " << v.detail
                << "\n";
    }
    std::cout << (report.clean ? "clean" : "violations found") << " (" << trades.size()
              << " trades)\n";
    if (!report.clean) throw pw::Error("series failed validation");
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// Regenerates the checked-in files under tests/data. Run manually from the
// repo root after a deliberate format change:
//   ./build/tests/make_fixtures tests/data

#include <filesystem>
#include <fstream>
#include <iostream>

#include "helpers/synthetic.hpp"
#include "pumpwatch/core/serde.hpp"
#include "pumpwatch/featurize/features.hpp"
#include "pumpwatch/ingest/files.hpp"
#include "pumpwatch/models/artifact.hpp"
#include "pumpwatch/replay/engine.hpp"

using namespace pumpwatch;
using namespace pumpwatch::testing;

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "tests/data";
  std::filesystem::create_directories(out_dir);

  PipelineConfig config;
  config.chunk_seconds = 25;
  config.window_seconds = 1'800;
  config.cooldown_seconds = 1'800;

  SynthConfig synth;
  synth.seed = 2024;
  synth.duration_s = 7'200;

  const auto fx = make_injected_series(2024, config, 50.0, 0.7, synth);
  ingest::write_trades_csv(out_dir / "fixture_trades.csv",
                           std::span<const TradeRecord>(fx.injected));

  const std::vector<PumpEvent> events = {{"FIXBTC", "mock", fx.at_ms, "fixture"}};
  ingest::write_events_csv(out_dir / "fixture_events.csv", events);

  {
    std::ofstream cfg(out_dir / "fixture_config.json");
    json j = config;
    cfg << j.dump(2) << '\n';
  }

  // Golden alerts come from the batch pipeline: label, fit the threshold
  // detector, score with the cooldown gate.
  auto vectors = batch_features(fx.injected, config);
  featurize::label_chunks(vectors, events, config);
  models::ModelSpec spec;
  spec.type = models::ModelType::Threshold;
  const auto trained = models::train_artifact(spec, vectors, config, "threshold");
  const auto alerts = replay::cooldown_filter(vectors, trained.artifact, "FIXBTC");

  std::ofstream golden(out_dir / "golden_alerts.jsonl");
  for (const DetectionAlert& a : alerts) golden << alert_to_jsonl(a) << '\n';

  std::cout << "fixtures written to " << out_dir << " (" << fx.injected.size() << " trades, "
            << alerts.size() << " golden alerts)\n";
  return 0;
}

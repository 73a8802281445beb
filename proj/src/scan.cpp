#include "pumpwatch/eval/scan.hpp"

#include <cmath>

#include "pumpwatch/core/serde.hpp"
#include "pumpwatch/replay/engine.hpp"
#include "pumpwatch/util/time.hpp"

namespace pumpwatch::eval {

ScanReport scan_suspects(const models::ModelArtifact& artifact,
                         std::span<const SymbolSeries> series,
                         std::span<const PumpEvent> events) {
  const std::int64_t chunk_ms = artifact.config.chunk_ms();
  ScanReport report;

  for (const SymbolSeries& s : series) {
    const auto alerts = replay::batch_detect(s.trades, artifact, s.symbol);
    for (const DetectionAlert& a : alerts) {
      bool matched = false;
      bool in_core = false;
      for (const PumpEvent& e : events) {
        if (e.symbol != s.symbol) continue;
        const std::int64_t signal_chunk = floor_to(e.signal_ts_ms, chunk_ms);
        if (std::llabs(a.chunk_start_ms - signal_chunk) <= chunk_ms) {
          matched = true;
          break;
        }
        const std::int64_t day = utc_day(e.signal_ts_ms);
        const std::int64_t core_begin = day_start_ms(day - 1);
        const std::int64_t core_end = day_start_ms(day + 2);
        if (a.chunk_start_ms >= core_begin && a.chunk_start_ms < core_end) in_core = true;
      }
      if (matched) {
        report.matched.push_back(a);
      } else if (in_core) {
        report.in_core.push_back(a);
      } else {
        report.suspects.push_back(a);
      }
    }
  }
  return report;
}

nlohmann::json scan_report_to_json(const ScanReport& report) {
  nlohmann::json j;
  j["counts"] = {{"matched", report.matched.size()},
                 {"in_core", report.in_core.size()},
                 {"suspects", report.suspects.size()}};
  j["matched"] = report.matched;
  j["in_core"] = report.in_core;
  j["suspects"] = report.suspects;
  return j;
}

std::vector<EventLatency> detection_latency(std::span<const DetectionAlert> alerts,
                                            std::span<const PumpEvent> events,
                                            const PipelineConfig& config) {
  const std::int64_t chunk_ms = config.chunk_ms();
  std::vector<EventLatency> out;
  out.reserve(events.size());

  for (const PumpEvent& e : events) {
    EventLatency el;
    el.event = e;
    std::int64_t best_distance = config.cooldown_ms();
    for (const DetectionAlert& a : alerts) {
      if (a.symbol != e.symbol) continue;
      const std::int64_t distance = std::llabs(a.chunk_start_ms - e.signal_ts_ms);
      if (distance <= best_distance) {
        best_distance = distance;
        el.alert = a;
      }
    }
    if (el.alert) {
      const std::int64_t chunk_end = el.alert->chunk_start_ms + chunk_ms;
      el.latency_seconds = static_cast<double>(chunk_end - e.signal_ts_ms) / 1000.0;
    }
    out.push_back(std::move(el));
  }
  return out;
}

}  // namespace pumpwatch::eval

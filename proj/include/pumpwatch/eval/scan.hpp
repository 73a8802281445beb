#pragma once

#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "pumpwatch/models/artifact.hpp"

namespace pumpwatch::eval {

struct SymbolSeries {
  std::string symbol;
  std::vector<TradeRecord> trades;
};

/// Alerts from a long-range scan, split by what explains them: a known
/// event (same symbol, within one chunk of the signal), the core 3-day
/// window around a known event, or nothing — the suspects.
struct ScanReport {
  std::vector<DetectionAlert> matched;
  std::vector<DetectionAlert> in_core;
  std::vector<DetectionAlert> suspects;

  std::size_t total() const { return matched.size() + in_core.size() + suspects.size(); }
};

/// Runs the detector over each symbol's full series (cooldown-gated) and
/// classifies every alert against the known events.
ScanReport scan_suspects(const models::ModelArtifact& artifact,
                         std::span<const SymbolSeries> series,
                         std::span<const PumpEvent> events);

nlohmann::json scan_report_to_json(const ScanReport& report);

struct EventLatency {
  PumpEvent event;
  std::optional<DetectionAlert> alert;      // empty = missed
  std::optional<double> latency_seconds;    // alert chunk end - signal; may be negative
};

/// Matches each event to the nearest same-symbol alert within one cooldown
/// interval of its signal. Latency is measured to the alert chunk's end,
/// the moment the alert could actually fire.
std::vector<EventLatency> detection_latency(std::span<const DetectionAlert> alerts,
                                            std::span<const PumpEvent> events,
                                            const PipelineConfig& config);

}  // namespace pumpwatch::eval

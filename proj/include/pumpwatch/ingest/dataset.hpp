#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pumpwatch/ingest/client.hpp"

namespace pumpwatch::ingest {

/// Half-open range of UTC day indices.
struct DayRange {
  std::int64_t begin_day = 0;
  std::int64_t end_day = 0;

  std::int64_t days() const { return end_day - begin_day; }
  bool contains(std::int64_t day) const { return day >= begin_day && day < end_day; }

  bool operator==(const DayRange&) const = default;
};

/// Per-symbol union of the events' day windows. Each event covers
/// [signal_day - days_before, signal_day + days_after); overlapping or
/// adjacent windows merge so no day is stored twice.
std::map<std::string, std::vector<DayRange>> plan_symbol_ranges(std::span<const PumpEvent> events,
                                                                std::int32_t days_before,
                                                                std::int32_t days_after);

struct ManifestFile {
  std::string symbol;
  DayRange range;
  std::string filename;  // relative to the dataset directory
  std::int64_t fetched_at_ms = 0;
};

struct DatasetManifest {
  std::vector<PumpEvent> events;
  std::vector<ManifestFile> files;
  /// files index per event; -1 when the fetch failed.
  std::vector<std::int32_t> event_files;

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static DatasetManifest load(const std::filesystem::path& path);
};

struct BuildResult {
  DatasetManifest manifest;
  std::vector<std::string> errors;  // one line per failed range
};

/// Fetches one trade file per (symbol, merged day range) into out_dir and
/// records the event-to-file mapping. Symbols fetch concurrently; failures
/// are collected while successfully built entries stay in the manifest.
BuildResult build_event_dataset(std::span<const PumpEvent> events, const ClientConfig& client_config,
                                const std::filesystem::path& out_dir, std::int32_t days_before = 7,
                                std::int32_t days_after = 7);

/// The event's core series: [signal_day - 1, signal_day + 2) UTC. Throws
/// Error("event not found") or Error("partial coverage ...") when the
/// manifest cannot serve those three days.
std::vector<TradeRecord> extract_core_days(const DatasetManifest& manifest, const PumpEvent& event,
                                           const std::filesystem::path& dataset_dir);

/// Core day range helper shared with the scan classification.
DayRange core_day_range(const PumpEvent& event);

}  // namespace pumpwatch::ingest

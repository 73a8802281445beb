#include "pumpwatch/ingest/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>

#include "pumpwatch/util/time.hpp"

namespace pumpwatch::ingest {

std::map<std::string, std::vector<DayRange>> plan_symbol_ranges(std::span<const PumpEvent> events,
                                                                std::int32_t days_before,
                                                                std::int32_t days_after) {
  if (days_before < 0 || days_after < 1) throw Error("day window must cover the signal day");

  std::map<std::string, std::vector<DayRange>> plan;
  for (const PumpEvent& e : events) {
    const std::int64_t day = utc_day(e.signal_ts_ms);
    plan[e.symbol].push_back({day - days_before, day + days_after});
  }
  for (auto& [symbol, ranges] : plan) {
    std::sort(ranges.begin(), ranges.end(),
              [](const DayRange& a, const DayRange& b) { return a.begin_day < b.begin_day; });
    std::vector<DayRange> merged;
    for (const DayRange& r : ranges) {
      if (!merged.empty() && r.begin_day <= merged.back().end_day) {
        merged.back().end_day = std::max(merged.back().end_day, r.end_day);
      } else {
        merged.push_back(r);
      }
    }
    ranges = std::move(merged);
  }
  return plan;
}

DayRange core_day_range(const PumpEvent& event) {
  const std::int64_t day = utc_day(event.signal_ts_ms);
  return {day - 1, day + 2};
}

nlohmann::json DatasetManifest::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  auto& ev = j["events"] = nlohmann::json::array();
  for (const PumpEvent& e : events) {
    ev.push_back({{"symbol", e.symbol},
                  {"exchange", e.exchange},
                  {"signal_ts_ms", e.signal_ts_ms},
                  {"group", e.group}});
  }
  auto& fs = j["files"] = nlohmann::json::array();
  for (const ManifestFile& f : files) {
    fs.push_back({{"symbol", f.symbol},
                  {"begin_day", f.range.begin_day},
                  {"end_day", f.range.end_day},
                  {"filename", f.filename},
                  {"fetched_at_ms", f.fetched_at_ms}});
  }
  j["event_files"] = event_files;
  return j;
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json& j) {
  DatasetManifest m;
  for (const auto& ej : j.at("events")) {
    PumpEvent e;
    e.symbol = ej.at("symbol").get<std::string>();
    e.exchange = ej.at("exchange").get<std::string>();
    e.signal_ts_ms = ej.at("signal_ts_ms").get<std::int64_t>();
    e.group = ej.value("group", "");
    m.events.push_back(std::move(e));
  }
  for (const auto& fj : j.at("files")) {
    ManifestFile f;
    f.symbol = fj.at("symbol").get<std::string>();
    f.range.begin_day = fj.at("begin_day").get<std::int64_t>();
    f.range.end_day = fj.at("end_day").get<std::int64_t>();
    f.filename = fj.at("filename").get<std::string>();
    f.fetched_at_ms = fj.value("fetched_at_ms", std::int64_t{0});
    m.files.push_back(std::move(f));
  }
  m.event_files = j.at("event_files").get<std::vector<std::int32_t>>();
  return m;
}

void DatasetManifest::save(const std::filesystem::path& path) const {
  const std::filesystem::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + temp.string());
    out << to_json().dump(2) << '\n';
    if (!out) throw Error("write failed: " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

namespace {

std::string range_filename(const std::string& symbol, const DayRange& range) {
  return symbol + "_" + format_utc_day(range.begin_day) + "_" +
         format_utc_day(range.end_day - 1) + ".csv";
}

std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct RangeResult {
  std::string symbol;
  DayRange range;
  std::string filename;
  std::int64_t fetched_at_ms = 0;
  bool ok = false;
  std::string error;
};

}  // namespace

BuildResult build_event_dataset(std::span<const PumpEvent> events,
                                const ClientConfig& client_config,
                                const std::filesystem::path& out_dir, std::int32_t days_before,
                                std::int32_t days_after) {
  std::filesystem::create_directories(out_dir);
  const auto plan = plan_symbol_ranges(events, days_before, days_after);

  // One task per symbol; ranges within a symbol fetch sequentially.
  std::vector<std::future<std::vector<RangeResult>>> tasks;
  for (const auto& [symbol, ranges] : plan) {
    tasks.push_back(std::async(std::launch::async, [symbol = symbol, ranges = ranges,
                                                    &client_config, &out_dir] {
      std::vector<RangeResult> results;
      ExchangeClient client(client_config);
      for (const DayRange& range : ranges) {
        RangeResult r{symbol, range, range_filename(symbol, range), 0, false, ""};
        try {
          const auto trades = client.fetch_trades(symbol, day_start_ms(range.begin_day),
                                                  day_start_ms(range.end_day));
          write_trades_csv(out_dir / r.filename, trades);
          r.fetched_at_ms = wall_clock_ms();
          r.ok = true;
        } catch (const std::exception& e) {
          r.error = symbol + " [" + format_utc_day(range.begin_day) + ".." +
                    format_utc_day(range.end_day - 1) + "]: " + e.what();
        }
        results.push_back(std::move(r));
      }
      return results;
    }));
  }

  BuildResult result;
  result.manifest.events.assign(events.begin(), events.end());

  std::vector<RangeResult> all;
  for (auto& task : tasks) {
    auto part = task.get();
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }

  for (RangeResult& r : all) {
    if (r.ok) {
      result.manifest.files.push_back({r.symbol, r.range, r.filename, r.fetched_at_ms});
    } else {
      result.errors.push_back(std::move(r.error));
    }
  }

  for (const PumpEvent& e : events) {
    const std::int64_t day = utc_day(e.signal_ts_ms);
    std::int32_t index = -1;
    for (std::size_t f = 0; f < result.manifest.files.size(); ++f) {
      const ManifestFile& mf = result.manifest.files[f];
      if (mf.symbol == e.symbol && mf.range.contains(day)) {
        index = static_cast<std::int32_t>(f);
        break;
      }
    }
    result.manifest.event_files.push_back(index);
  }
  return result;
}

std::vector<TradeRecord> extract_core_days(const DatasetManifest& manifest, const PumpEvent& event,
                                           const std::filesystem::path& dataset_dir) {
  std::int32_t file_index = -1;
  for (std::size_t i = 0; i < manifest.events.size(); ++i) {
    if (manifest.events[i].symbol == event.symbol &&
        manifest.events[i].signal_ts_ms == event.signal_ts_ms) {
      file_index = manifest.event_files[i];
      break;
    }
  }
  if (file_index < 0) throw Error("event not found in manifest: " + event.symbol);

  const ManifestFile& file = manifest.files[static_cast<std::size_t>(file_index)];
  const DayRange core = core_day_range(event);
  if (core.begin_day < file.range.begin_day || core.end_day > file.range.end_day) {
    throw Error("partial coverage: core days [" + format_utc_day(core.begin_day) + ".." +
                format_utc_day(core.end_day - 1) + "] exceed stored range of " + file.filename);
  }

  const std::int64_t begin_ms = day_start_ms(core.begin_day);
  const std::int64_t end_ms = day_start_ms(core.end_day);
  std::vector<TradeRecord> out;
  for_each_trade_csv(dataset_dir / file.filename, [&](const TradeRecord& t) {
    if (t.ts_ms >= begin_ms && t.ts_ms < end_ms) out.push_back(t);
  });
  return out;
}

}  // namespace pumpwatch::ingest

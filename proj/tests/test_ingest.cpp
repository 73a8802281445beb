#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "helpers/mock_exchange.hpp"
#include "helpers/oracles.hpp"
#include "pumpwatch/ingest/client.hpp"
#include "pumpwatch/ingest/dataset.hpp"
#include "pumpwatch/util/time.hpp"

using namespace pumpwatch;
using namespace pumpwatch::ingest;
using namespace pumpwatch::testing;

namespace {

ClientConfig mock_config(const MockExchange& mock, std::int32_t page_size = 1000) {
  ClientConfig cc;
  cc.base_url = mock.base_url();
  cc.page_size = page_size;
  cc.requests_per_minute = 600'000;  // effectively unthrottled
  cc.max_retries = 3;
  cc.backoff_initial_ms = 1;
  return cc;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const std::int64_t kDay0 = 17'775;  // 2018-09-01
const std::int64_t kT0 = day_start_ms(kDay0);

}  // namespace

TEST_CASE("fetch: pagination concatenation equals one oversized page") {
  const auto rows = make_mock_rows(1, 10'000, 500, kT0);
  MockExchange mock({{"AAABTC", rows}});
  const std::int64_t end_ms = rows.back().ts_ms + 1;

  ExchangeClient paged(mock_config(mock, 1000));
  const auto many_pages = paged.fetch_trades("AAABTC", kT0, end_ms);

  ExchangeClient single(mock_config(mock, 20'000));
  const auto one_page = single.fetch_trades("AAABTC", kT0, end_ms);

  REQUIRE(many_pages.size() == 10'000);
  REQUIRE(one_page.size() == 10'000);

  const auto dir = std::filesystem::temp_directory_path();
  write_trades_csv(dir / "pw_paged.csv", many_pages);
  write_trades_csv(dir / "pw_single.csv", one_page);
  CHECK(slurp(dir / "pw_paged.csv") == slurp(dir / "pw_single.csv"));
  std::filesystem::remove(dir / "pw_paged.csv");
  std::filesystem::remove(dir / "pw_single.csv");
}

TEST_CASE("fetch: re-fetching a covered interval writes a byte-identical file") {
  const auto rows = make_mock_rows(2, 3'000, 77, kT0);
  MockExchange mock({{"AAABTC", rows}});
  ExchangeClient client(mock_config(mock, 512));
  const std::int64_t end_ms = rows.back().ts_ms + 1;

  const auto dir = std::filesystem::temp_directory_path();
  write_trades_csv(dir / "pw_fetch1.csv", client.fetch_trades("AAABTC", kT0, end_ms));
  write_trades_csv(dir / "pw_fetch2.csv", client.fetch_trades("AAABTC", kT0, end_ms));
  CHECK(slurp(dir / "pw_fetch1.csv") == slurp(dir / "pw_fetch2.csv"));
  std::filesystem::remove(dir / "pw_fetch1.csv");
  std::filesystem::remove(dir / "pw_fetch2.csv");
}

TEST_CASE("fetch: empty interval returns an empty sequence") {
  const auto rows = make_mock_rows(3, 100, 1, kT0);
  MockExchange mock({{"AAABTC", rows}});
  ExchangeClient client(mock_config(mock));
  const auto trades = client.fetch_trades("AAABTC", kT0 - 10'000, kT0 - 9'999);
  CHECK(trades.empty());
}

TEST_CASE("fetch: result is sorted, negated taker flag, raw strings kept") {
  const auto rows = make_mock_rows(4, 500, 9, kT0);
  MockExchange mock({{"AAABTC", rows}});
  ExchangeClient client(mock_config(mock, 128));
  const auto trades = client.fetch_trades("AAABTC", kT0, rows.back().ts_ms + 1);
  REQUIRE(trades.size() == rows.size());
  for (std::size_t i = 0; i < trades.size(); ++i) {
    CHECK(trades[i].record.trade_id == rows[i].id);
    CHECK(trades[i].record.is_buy_taker == !rows[i].buyer_is_maker);
    CHECK(trades[i].price_raw == rows[i].price);
    CHECK(trades[i].qty_raw == rows[i].qty);
    if (i > 0) CHECK(trade_order(trades[i - 1].record, trades[i].record));
  }
}

TEST_CASE("fetch: transient failures retry with backoff and then succeed") {
  const auto rows = make_mock_rows(5, 300, 1, kT0);
  MockExchange mock({{"AAABTC", rows}}, {.fail_first = 2, .drop_ids = {}});
  ExchangeClient client(mock_config(mock, 100));
  const auto trades = client.fetch_trades("AAABTC", kT0, rows.back().ts_ms + 1);
  CHECK(trades.size() == rows.size());
  CHECK(mock.request_count() >= 5);  // 2 failures + at least 3 pages
}

TEST_CASE("fetch: exhausted retries abort with a resumable checkpoint") {
  const auto rows = make_mock_rows(6, 300, 1, kT0);
  MockExchange mock({{"AAABTC", rows}}, {.fail_first = 100, .drop_ids = {}});
  auto cc = mock_config(mock, 100);
  cc.max_retries = 2;
  ExchangeClient client(cc);
  try {
    (void)client.fetch_trades("AAABTC", kT0, rows.back().ts_ms + 1);
    FAIL("expected FetchError");
  } catch (const FetchError& e) {
    CHECK(e.kind == FetchError::Kind::NetworkExhausted);
    REQUIRE(e.checkpoint.has_value());
    CHECK(e.partial.empty());
  }
}

TEST_CASE("fetch: unknown symbol aborts without retries") {
  const auto rows = make_mock_rows(7, 50, 1, kT0);
  MockExchange mock({{"AAABTC", rows}});
  ExchangeClient client(mock_config(mock));
  try {
    (void)client.fetch_trades("NOPE", kT0, kT0 + 1000);
    FAIL("expected FetchError");
  } catch (const FetchError& e) {
    CHECK(e.kind == FetchError::Kind::SymbolUnknown);
  }
  CHECK(mock.request_count() == 1);
}

TEST_CASE("fetch: an id gap aborts with the partial result and checkpoint") {
  const auto rows = make_mock_rows(8, 1'000, 100, kT0);
  MockExchange mock({{"AAABTC", rows}}, {.fail_first = 0, .drop_ids = {100 + 437}});
  ExchangeClient client(mock_config(mock, 200));
  try {
    (void)client.fetch_trades("AAABTC", kT0, rows.back().ts_ms + 1);
    FAIL("expected FetchError");
  } catch (const FetchError& e) {
    CHECK(e.kind == FetchError::Kind::GapDetected);
    REQUIRE(e.checkpoint.has_value());
    CHECK(e.checkpoint->next_from_id == 100 + 437);
    CHECK(e.partial.size() == 437);
  }
}

TEST_CASE("fetch: resume-from-id continues where a checkpoint left off") {
  const auto rows = make_mock_rows(9, 600, 1, kT0);
  MockExchange mock({{"AAABTC", rows}});
  ExchangeClient client(mock_config(mock, 100));
  const std::int64_t end_ms = rows.back().ts_ms + 1;

  const auto full = client.fetch_trades("AAABTC", kT0, end_ms);
  const auto tail = client.fetch_trades("AAABTC", kT0, end_ms, 301);
  REQUIRE(tail.size() == 300);
  CHECK(tail.front().record.trade_id == 301);
  CHECK(tail.back().record.trade_id == full.back().record.trade_id);
}

TEST_CASE("fetch: requests-per-minute cap spaces requests out") {
  const auto rows = make_mock_rows(10, 500, 1, kT0);
  MockExchange mock({{"AAABTC", rows}});
  auto cc = mock_config(mock, 100);
  cc.requests_per_minute = 3'000;  // 20 ms between requests
  ExchangeClient client(cc);
  const auto start = std::chrono::steady_clock::now();
  (void)client.fetch_trades("AAABTC", kT0, rows.back().ts_ms + 1);  // 5 pages
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  CHECK(elapsed.count() >= 80);  // 4 inter-request waits
}

TEST_CASE("plan: two events three days apart merge into one 17-day range") {
  const std::vector<PumpEvent> events = {{"AAABTC", "mock", kT0 + 1000, ""},
                                         {"AAABTC", "mock", kT0 + 3 * kMsPerDay + 500, ""}};
  const auto plan = plan_symbol_ranges(events, 7, 7);
  REQUIRE(plan.at("AAABTC").size() == 1);
  CHECK(plan.at("AAABTC")[0].days() == 17);
}

TEST_CASE("plan: a single event covers 14 days") {
  const std::vector<PumpEvent> events = {{"AAABTC", "mock", kT0 + 5'000, ""}};
  const auto plan = plan_symbol_ranges(events, 7, 7);
  REQUIRE(plan.at("AAABTC").size() == 1);
  CHECK(plan.at("AAABTC")[0].days() == 14);
  CHECK(plan.at("AAABTC")[0].begin_day == kDay0 - 7);
  CHECK(plan.at("AAABTC")[0].end_day == kDay0 + 7);
}

TEST_CASE("plan: different coins never share a file") {
  const std::vector<PumpEvent> events = {{"AAABTC", "mock", kT0, ""},
                                         {"BBBBTC", "mock", kT0, ""}};
  const auto plan = plan_symbol_ranges(events, 7, 7);
  CHECK(plan.size() == 2);
  CHECK(plan.at("AAABTC").size() == 1);
  CHECK(plan.at("BBBBTC").size() == 1);
}

TEST_CASE("plan: merged ranges equal the brute-force day union on random layouts") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    SplitMix64 rng(seed);
    const int n_events = 1 + static_cast<int>(rng.below(12));
    std::vector<PumpEvent> events;
    std::vector<std::int64_t> days;
    for (int i = 0; i < n_events; ++i) {
      const std::int64_t day = kDay0 + static_cast<std::int64_t>(rng.below(40));
      days.push_back(day);
      events.push_back({"X", "mock", day_start_ms(day) + static_cast<std::int64_t>(rng.below(kMsPerDay)), ""});
    }
    const auto plan = plan_symbol_ranges(events, 7, 7);
    const auto expected = oracle_day_union(days, 7, 7);

    std::set<std::int64_t> covered;
    std::int64_t total = 0;
    for (const DayRange& r : plan.at("X")) {
      total += r.days();
      for (std::int64_t d = r.begin_day; d < r.end_day; ++d) {
        CHECK(covered.insert(d).second);  // non-overlapping after dedup
      }
    }
    CHECK(covered == expected);
    CHECK(total == static_cast<std::int64_t>(expected.size()));
  }
}

TEST_CASE("build_event_dataset: end-to-end against the mock, manifest maps events to files") {
  // Two symbols; AAABTC has two events close enough to merge.
  std::map<std::string, std::vector<MockRow>> data;
  data["AAABTC"] = make_mock_rows(20, 4'000, 1000, kT0 - 2 * kMsPerDay, 200'000);
  data["BBBBTC"] = make_mock_rows(21, 2'000, 5000, kT0 - 2 * kMsPerDay, 200'000);
  MockExchange mock(data);

  const std::vector<PumpEvent> events = {{"AAABTC", "mock", kT0 + 1000, "g1"},
                                         {"AAABTC", "mock", kT0 + kMsPerDay, "g1"},
                                         {"BBBBTC", "mock", kT0 + 2000, "g2"}};
  const auto dir = std::filesystem::temp_directory_path() / "pw_dataset_test";
  std::filesystem::remove_all(dir);

  const auto result = build_event_dataset(events, mock_config(mock, 500), dir, 1, 2);
  CHECK(result.errors.empty());
  REQUIRE(result.manifest.files.size() == 2);  // one merged file per symbol
  REQUIRE(result.manifest.event_files.size() == 3);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::int32_t f = result.manifest.event_files[i];
    REQUIRE(f >= 0);
    CHECK(result.manifest.files[f].symbol == events[i].symbol);
    CHECK(std::filesystem::exists(dir / result.manifest.files[f].filename));
  }
  // AAABTC events share the merged file.
  CHECK(result.manifest.event_files[0] == result.manifest.event_files[1]);

  // Manifest JSON round-trip.
  result.manifest.save(dir / "manifest.json");
  const auto loaded = DatasetManifest::load(dir / "manifest.json");
  CHECK(loaded.events == result.manifest.events);
  CHECK(loaded.event_files == result.manifest.event_files);
  REQUIRE(loaded.files.size() == result.manifest.files.size());
  for (std::size_t i = 0; i < loaded.files.size(); ++i) {
    CHECK(loaded.files[i].symbol == result.manifest.files[i].symbol);
    CHECK(loaded.files[i].range == result.manifest.files[i].range);
    CHECK(loaded.files[i].filename == result.manifest.files[i].filename);
  }

  // Core-day extraction stays inside [D-1, D+2).
  const auto core = extract_core_days(loaded, events[0], dir);
  CHECK_FALSE(core.empty());
  const std::int64_t begin = day_start_ms(utc_day(events[0].signal_ts_ms) - 1);
  const std::int64_t end = day_start_ms(utc_day(events[0].signal_ts_ms) + 2);
  for (const TradeRecord& t : core) {
    CHECK(t.ts_ms >= begin);
    CHECK(t.ts_ms < end);
  }

  PumpEvent missing{"CCCBTC", "mock", kT0, ""};
  CHECK_THROWS_AS((void)extract_core_days(loaded, missing, dir), Error);

  std::filesystem::remove_all(dir);
}

TEST_CASE("build_event_dataset: failures keep successful entries in the manifest") {
  std::map<std::string, std::vector<MockRow>> data;
  data["AAABTC"] = make_mock_rows(22, 2'000, 1, kT0 - 2 * kMsPerDay, 200'000);
  MockExchange mock(data);

  const std::vector<PumpEvent> events = {{"AAABTC", "mock", kT0 + 1000, ""},
                                         {"GONEBTC", "mock", kT0 + 1000, ""}};
  const auto dir = std::filesystem::temp_directory_path() / "pw_dataset_fail";
  std::filesystem::remove_all(dir);
  const auto result = build_event_dataset(events, mock_config(mock, 500), dir, 1, 2);
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].find("GONEBTC") != std::string::npos);
  REQUIRE(result.manifest.files.size() == 1);
  CHECK(result.manifest.event_files[0] == 0);
  CHECK(result.manifest.event_files[1] == -1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("extract_core_days: missing day yields a partial-coverage error") {
  // Stored range covers only [D, D+2); the core needs D-1.
  DatasetManifest manifest;
  manifest.events = {{"AAABTC", "mock", kT0 + 1000, ""}};
  manifest.files = {{"AAABTC", {kDay0, kDay0 + 2}, "AAABTC_x.csv", 0}};
  manifest.event_files = {0};
  try {
    (void)extract_core_days(manifest, manifest.events[0], ".");
    FAIL("expected partial-coverage error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("partial coverage") != std::string::npos);
  }
}

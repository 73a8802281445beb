#include "pumpwatch/ingest/client.hpp"

#include <chrono>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "pumpwatch/util/numfmt.hpp"

namespace pumpwatch::ingest {

namespace {

using Clock = std::chrono::steady_clock;

std::string raw_decimal(const nlohmann::json& field) {
  if (field.is_string()) return field.get<std::string>();
  return field.dump();
}

}  // namespace

std::string_view fetch_error_kind_name(FetchError::Kind kind) {
  switch (kind) {
    case FetchError::Kind::NetworkExhausted: return "network-exhausted";
    case FetchError::Kind::SymbolUnknown: return "symbol-unknown";
    case FetchError::Kind::GapDetected: return "gap-detected";
  }
  return "unknown";
}

struct ExchangeClient::Impl {
  std::mutex throttle_mutex;
  Clock::time_point next_slot = Clock::now();
};

ExchangeClient::ExchangeClient(ClientConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  if (config_.page_size < 1) throw Error("page_size must be >= 1");
  if (config_.requests_per_minute < 1) throw Error("requests_per_minute must be >= 1");
  if (config_.max_retries < 0) throw Error("max_retries must be >= 0");
}

ExchangeClient::~ExchangeClient() = default;

void ExchangeClient::throttle() {
  const auto interval = std::chrono::milliseconds(60'000 / config_.requests_per_minute);
  Clock::time_point wait_until;
  {
    std::lock_guard lock(impl_->throttle_mutex);
    const auto now = Clock::now();
    wait_until = std::max(impl_->next_slot, now);
    impl_->next_slot = wait_until + interval;
  }
  std::this_thread::sleep_until(wait_until);
}

namespace {

/// One page with retry/backoff. Throws FetchError when the budget is spent
/// or the endpoint rejects the request outright.
std::string fetch_page(httplib::Client& http, const ClientConfig& config,
                       const std::string& query, std::vector<FetchedTrade>& partial,
                       const FetchCheckpoint& checkpoint,
                       const std::function<void()>& throttle) {
  int backoff_ms = config.backoff_initial_ms;
  for (std::int32_t attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    throttle();
    auto res = http.Get(config.endpoint_path + "?" + query);
    if (res && res->status >= 200 && res->status < 300) return res->body;
    if (res && res->status >= 400 && res->status < 500) {
      throw FetchError(FetchError::Kind::SymbolUnknown,
                       "endpoint rejected request (" + std::to_string(res->status) + "): " + query,
                       checkpoint, std::move(partial));
    }
    // Connection failures and 5xx responses are transient; retry.
  }
  throw FetchError(FetchError::Kind::NetworkExhausted,
                   "retries exhausted after " + std::to_string(config.max_retries + 1) +
                       " attempts: " + query,
                   checkpoint, std::move(partial));
}

}  // namespace

std::vector<FetchedTrade> ExchangeClient::fetch_trades(const std::string& symbol,
                                                       std::int64_t start_ms, std::int64_t end_ms,
                                                       std::optional<std::int64_t> resume_from_id) {
  if (start_ms >= end_ms) throw Error("start_ms must be before end_ms");

  httplib::Client http(config_.base_url);
  http.set_connection_timeout(10);
  http.set_read_timeout(30);

  std::vector<FetchedTrade> trades;
  std::optional<std::int64_t> cursor = resume_from_id;  // next id to request
  std::optional<std::int64_t> expected_id;              // contiguity check

  while (true) {
    FetchCheckpoint checkpoint{cursor.value_or(0),
                               trades.empty() ? start_ms : trades.back().record.ts_ms,
                               trades.size()};
    std::string query = "symbol=" + symbol + "&limit=" + std::to_string(config_.page_size);
    if (cursor) {
      query += "&fromId=" + std::to_string(*cursor);
    } else {
      query += "&startTime=" + std::to_string(start_ms);
    }

    const std::string body =
        fetch_page(http, config_, query, trades, checkpoint, [this] { throttle(); });
    nlohmann::json page;
    try {
      page = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw FetchError(FetchError::Kind::NetworkExhausted,
                       std::string("unparseable response: ") + e.what(), checkpoint,
                       std::move(trades));
    }
    if (!page.is_array()) {
      throw FetchError(FetchError::Kind::SymbolUnknown, "unexpected response shape", checkpoint,
                       std::move(trades));
    }
    if (page.empty()) break;

    bool reached_end = false;
    for (const auto& row : page) {
      FetchedTrade t;
      t.record.trade_id = row.at(config_.id_field).get<std::int64_t>();
      t.record.ts_ms = row.at(config_.ts_field).get<std::int64_t>();
      t.price_raw = raw_decimal(row.at(config_.price_field));
      t.qty_raw = raw_decimal(row.at(config_.qty_field));
      t.record.price = parse_double(t.price_raw);
      t.record.qty = parse_double(t.qty_raw);
      const bool flag = row.at(config_.buyer_maker_field).get<bool>();
      t.record.is_buy_taker = config_.negate_buyer_maker ? !flag : flag;

      if (expected_id && t.record.trade_id != *expected_id) {
        FetchCheckpoint gap_checkpoint{*expected_id,
                                       trades.empty() ? start_ms : trades.back().record.ts_ms,
                                       trades.size()};
        throw FetchError(FetchError::Kind::GapDetected,
                         "cursor discontinuity: expected id " + std::to_string(*expected_id) +
                             ", got " + std::to_string(t.record.trade_id),
                         gap_checkpoint, std::move(trades));
      }
      expected_id = t.record.trade_id + 1;

      if (t.record.ts_ms >= end_ms) {
        reached_end = true;
        break;
      }
      if (t.record.ts_ms >= start_ms) trades.push_back(std::move(t));
    }
    if (reached_end) break;

    cursor = *expected_id;
    if (page.size() < static_cast<std::size_t>(config_.page_size)) break;  // caught up
  }

  return trades;
}

}  // namespace pumpwatch::ingest

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pumpwatch/ingest/files.hpp"

namespace pumpwatch::ingest {

/// Everything about the endpoint is configuration so a recorded-fixture
/// mock server can stand in for the live exchange. Defaults target the
/// aggregated-trades endpoint shape (dense id cursor, 1000-row pages).
struct ClientConfig {
  std::string base_url = "https://api.binance.com";
  std::string endpoint_path = "/api/v3/aggTrades";
  std::int32_t page_size = 1000;
  std::int32_t requests_per_minute = 1100;
  std::int32_t max_retries = 5;
  std::int32_t backoff_initial_ms = 250;  // doubled per retry

  // Response field mapping.
  std::string id_field = "a";
  std::string price_field = "p";
  std::string qty_field = "q";
  std::string ts_field = "T";
  std::string buyer_maker_field = "m";
  /// The exchange reports buyer-is-maker; a buy taker is its negation.
  bool negate_buyer_maker = true;
};

/// Where an aborted fetch can pick up again.
struct FetchCheckpoint {
  std::int64_t next_from_id = 0;
  std::int64_t last_ts_ms = 0;
  std::size_t fetched = 0;
};

class FetchError : public Error {
 public:
  enum class Kind { NetworkExhausted, SymbolUnknown, GapDetected };

  FetchError(Kind kind, const std::string& message, std::optional<FetchCheckpoint> checkpoint,
             std::vector<FetchedTrade> partial)
      : Error(message), kind(kind), checkpoint(checkpoint), partial(std::move(partial)) {}

  Kind kind;
  std::optional<FetchCheckpoint> checkpoint;
  std::vector<FetchedTrade> partial;  // trades retrieved before the abort
};

std::string_view fetch_error_kind_name(FetchError::Kind kind);

/// Paginated historical-trades client. Pages for one symbol are fetched
/// sequentially (the id cursor depends on the previous page). Concurrent
/// fetch_trades calls for different symbols are safe: each call owns its
/// connection and the request rate limiter is shared under a mutex.
class ExchangeClient {
 public:
  explicit ExchangeClient(ClientConfig config);
  ~ExchangeClient();

  ExchangeClient(const ExchangeClient&) = delete;
  ExchangeClient& operator=(const ExchangeClient&) = delete;

  /// All trades with ts_ms in [start_ms, end_ms), sorted by (ts_ms,
  /// trade_id). Follows the from-id cursor page by page; transient
  /// failures retry with exponential backoff up to the configured budget.
  /// Aborts throw FetchError carrying a resumable checkpoint and the
  /// partial result.
  std::vector<FetchedTrade> fetch_trades(const std::string& symbol, std::int64_t start_ms,
                                         std::int64_t end_ms,
                                         std::optional<std::int64_t> resume_from_id = {});

  const ClientConfig& config() const { return config_; }

 private:
  struct Impl;
  void throttle();

  ClientConfig config_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pumpwatch::ingest

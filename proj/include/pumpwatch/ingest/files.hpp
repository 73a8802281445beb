#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch::ingest {

/// A trade plus the exact decimal strings the exchange sent, kept so
/// stored files are byte-identical across re-fetches.
struct FetchedTrade {
  TradeRecord record;
  std::string price_raw;
  std::string qty_raw;
};

std::vector<TradeRecord> strip_raw(std::span<const FetchedTrade> trades);

/// Trades file: CSV `trade_id,ts_ms,price,qty,is_buy_taker` with
/// is_buy_taker as 0/1. Writers are atomic (temp file + rename).
void write_trades_csv(const std::filesystem::path& path, std::span<const FetchedTrade> trades);
void write_trades_csv(const std::filesystem::path& path, std::span<const TradeRecord> trades);
std::vector<TradeRecord> read_trades_csv(const std::filesystem::path& path);

/// Streaming reader for replay: invokes fn per record without holding the
/// file in memory. Throws Error with the line number on a malformed line.
void for_each_trade_csv(const std::filesystem::path& path,
                        const std::function<void(const TradeRecord&)>& fn);

/// Events file: CSV `symbol,exchange,signal_ts_ms,group`; group may be
/// empty.
void write_events_csv(const std::filesystem::path& path, std::span<const PumpEvent> events);
std::vector<PumpEvent> read_events_csv(const std::filesystem::path& path);

}  // namespace pumpwatch::ingest

#include "pumpwatch/ingest/files.hpp"

#include <fstream>
#include <sstream>

#include "pumpwatch/util/numfmt.hpp"

namespace pumpwatch::ingest {

namespace {

constexpr std::string_view kTradesHeader = "trade_id,ts_ms,price,qty,is_buy_taker";
constexpr std::string_view kEventsHeader = "symbol,exchange,signal_ts_ms,group";

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto pos = line.find(',');
    fields.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return fields;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

/// Writes through a temp file so readers never observe a partial file.
class AtomicWriter {
 public:
  explicit AtomicWriter(const std::filesystem::path& path)
      : final_(path), temp_(path.string() + ".tmp"), out_(temp_, std::ios::trunc) {
    if (!out_) throw Error("cannot open for writing: " + temp_.string());
  }

  std::ofstream& stream() { return out_; }

  void commit() {
    out_.close();
    if (out_.fail()) throw Error("write failed: " + temp_.string());
    std::filesystem::rename(temp_, final_);
  }

 private:
  std::filesystem::path final_;
  std::filesystem::path temp_;
  std::ofstream out_;
};

TradeRecord parse_trade_line(std::string_view line, std::size_t line_no,
                             const std::filesystem::path& path) {
  const auto fields = split_line(strip_cr(line));
  if (fields.size() != 5) {
    throw Error("malformed trade line " + std::to_string(line_no) + " in " + path.string());
  }
  try {
    TradeRecord t;
    t.trade_id = parse_int64(fields[0]);
    t.ts_ms = parse_int64(fields[1]);
    t.price = parse_double(fields[2]);
    t.qty = parse_double(fields[3]);
    const std::int64_t flag = parse_int64(fields[4]);
    if (flag != 0 && flag != 1) throw std::invalid_argument("is_buy_taker must be 0 or 1");
    t.is_buy_taker = flag == 1;
    return t;
  } catch (const std::invalid_argument& e) {
    throw Error("malformed trade line " + std::to_string(line_no) + " in " + path.string() +
                ": " + e.what());
  }
}

}  // namespace

std::vector<TradeRecord> strip_raw(std::span<const FetchedTrade> trades) {
  std::vector<TradeRecord> out;
  out.reserve(trades.size());
  for (const FetchedTrade& t : trades) out.push_back(t.record);
  return out;
}

void write_trades_csv(const std::filesystem::path& path, std::span<const FetchedTrade> trades) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  out << kTradesHeader << '\n';
  for (const FetchedTrade& t : trades) {
    out << t.record.trade_id << ',' << t.record.ts_ms << ',' << t.price_raw << ',' << t.qty_raw
        << ',' << (t.record.is_buy_taker ? 1 : 0) << '\n';
  }
  writer.commit();
}

void write_trades_csv(const std::filesystem::path& path, std::span<const TradeRecord> trades) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  out << kTradesHeader << '\n';
  for (const TradeRecord& t : trades) {
    out << t.trade_id << ',' << t.ts_ms << ',' << format_double(t.price) << ','
        << format_double(t.qty) << ',' << (t.is_buy_taker ? 1 : 0) << '\n';
  }
  writer.commit();
}

std::vector<TradeRecord> read_trades_csv(const std::filesystem::path& path) {
  std::vector<TradeRecord> out;
  for_each_trade_csv(path, [&](const TradeRecord& t) { out.push_back(t); });
  return out;
}

void for_each_trade_csv(const std::filesystem::path& path,
                        const std::function<void(const TradeRecord&)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty trade file: " + path.string());
  if (strip_cr(line) != kTradesHeader) {
    throw Error("unexpected trade file header in " + path.string());
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    fn(parse_trade_line(line, line_no, path));
  }
}

void write_events_csv(const std::filesystem::path& path, std::span<const PumpEvent> events) {
  AtomicWriter writer(path);
  auto& out = writer.stream();
  out << kEventsHeader << '\n';
  for (const PumpEvent& e : events) {
    out << e.symbol << ',' << e.exchange << ',' << e.signal_ts_ms << ',' << e.group << '\n';
  }
  writer.commit();
}

std::vector<PumpEvent> read_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty events file: " + path.string());
  if (strip_cr(line) != kEventsHeader) {
    throw Error("unexpected events file header in " + path.string());
  }
  std::vector<PumpEvent> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(strip_cr(line));
    if (fields.size() != 4) {
      throw Error("malformed event line " + std::to_string(line_no) + " in " + path.string());
    }
    PumpEvent e;
    e.symbol = std::string(fields[0]);
    e.exchange = std::string(fields[1]);
    e.signal_ts_ms = parse_int64(fields[2]);
    e.group = std::string(fields[3]);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace pumpwatch::ingest

#include "pumpwatch/core/validate.hpp"

#include <unordered_set>

#include "pumpwatch/util/time.hpp"

namespace pumpwatch {

std::string_view violation_kind_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::Ordering: return "ordering";
    case Violation::Kind::DuplicateId: return "duplicate-id";
    case Violation::Kind::NonPositivePrice: return "non-positive-price";
    case Violation::Kind::NonPositiveQty: return "non-positive-qty";
    case Violation::Kind::NonPositiveTimestamp: return "non-positive-timestamp";
    case Violation::Kind::TimestampGap: return "timestamp-gap";
  }
  return "unknown";
}

ValidationReport validate_trade_series(std::span<const TradeRecord> trades) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::size_t index, std::string detail) {
    report.violations.push_back({kind, index, std::move(detail)});
  };

  std::unordered_set<std::int64_t> seen_ids;
  seen_ids.reserve(trades.size());

  for (std::size_t i = 0; i < trades.size(); ++i) {
    const TradeRecord& t = trades[i];
    if (t.price <= 0.0) add(Violation::Kind::NonPositivePrice, i, "price " + std::to_string(t.price));
    if (t.qty <= 0.0) add(Violation::Kind::NonPositiveQty, i, "qty " + std::to_string(t.qty));
    if (t.ts_ms <= 0) add(Violation::Kind::NonPositiveTimestamp, i, "ts_ms " + std::to_string(t.ts_ms));

    if (!seen_ids.insert(t.trade_id).second) {
      add(Violation::Kind::DuplicateId, i, "trade_id " + std::to_string(t.trade_id));
    }

    if (i > 0) {
      const TradeRecord& prev = trades[i - 1];
      if (t.ts_ms < prev.ts_ms || t.trade_id <= prev.trade_id) {
        add(Violation::Kind::Ordering, i,
            "(" + std::to_string(t.ts_ms) + "," + std::to_string(t.trade_id) + ") after (" +
                std::to_string(prev.ts_ms) + "," + std::to_string(prev.trade_id) + ")");
      }
      if (t.ts_ms - prev.ts_ms > kMsPerDay) {
        add(Violation::Kind::TimestampGap, i,
            std::to_string((t.ts_ms - prev.ts_ms) / kMsPerHour) + "h gap");
      }
    }
  }

  report.clean = report.violations.empty();
  return report;
}

}  // namespace pumpwatch

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pumpwatch/core/types.hpp"

namespace pumpwatch {

struct Violation {
  enum class Kind {
    Ordering,         // (ts_ms, trade_id) not ascending
    DuplicateId,
    NonPositivePrice,
    NonPositiveQty,
    NonPositiveTimestamp,
    TimestampGap,     // consecutive trades more than 24h apart
  };

  Kind kind;
  std::size_t index;  // offending record position in the input
  std::string detail;
};

struct ValidationReport {
  bool clean = true;
  std::vector<Violation> violations;
};

/// Report-only series check: ordering, duplicate ids, non-positive
/// prices/quantities/timestamps, and gaps longer than 24 hours.
ValidationReport validate_trade_series(std::span<const TradeRecord> trades);

std::string_view violation_kind_name(Violation::Kind kind);

}  // namespace pumpwatch

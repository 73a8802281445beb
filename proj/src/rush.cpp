#include "pumpwatch/featurize/rush.hpp"

namespace pumpwatch::featurize {

std::vector<RushOrder> infer_rush_orders(std::span<const TradeRecord> trades) {
  std::vector<RushOrder> orders;
  for (std::size_t i = 0; i < trades.size(); ++i) {
    const TradeRecord& t = trades[i];
    if (i > 0 && !trade_order(trades[i - 1], t)) {
      throw Error("unsorted input at record " + std::to_string(i));
    }
    if (!t.is_buy_taker) continue;
    if (!orders.empty() && orders.back().ts_ms == t.ts_ms) {
      orders.back().quote_volume += t.quote_volume();
      orders.back().n_fills += 1;
    } else {
      orders.push_back({t.ts_ms, t.quote_volume(), 1});
    }
  }
  return orders;
}

}  // namespace pumpwatch::featurize

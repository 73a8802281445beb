#include "pumpwatch/core/serde.hpp"

namespace pumpwatch {

void to_json(json& j, const TradeRecord& t) {
  j = json{{"trade_id", t.trade_id},
           {"ts_ms", t.ts_ms},
           {"price", t.price},
           {"qty", t.qty},
           {"is_buy_taker", t.is_buy_taker}};
}

void from_json(const json& j, TradeRecord& t) {
  j.at("trade_id").get_to(t.trade_id);
  j.at("ts_ms").get_to(t.ts_ms);
  j.at("price").get_to(t.price);
  j.at("qty").get_to(t.qty);
  j.at("is_buy_taker").get_to(t.is_buy_taker);
}

void to_json(json& j, const RushOrder& r) {
  j = json{{"ts_ms", r.ts_ms}, {"quote_volume", r.quote_volume}, {"n_fills", r.n_fills}};
}

void from_json(const json& j, RushOrder& r) {
  j.at("ts_ms").get_to(r.ts_ms);
  j.at("quote_volume").get_to(r.quote_volume);
  j.at("n_fills").get_to(r.n_fills);
}

void to_json(json& j, const Chunk& c) {
  j = json{{"start_ms", c.start_ms},       {"width_s", c.width_s},
           {"n_trades", c.n_trades},       {"quote_volume", c.quote_volume},
           {"rush_volume", c.rush_volume}, {"close", c.close},
           {"price_max", c.price_max},     {"price_min", c.price_min}};
}

void from_json(const json& j, Chunk& c) {
  j.at("start_ms").get_to(c.start_ms);
  j.at("width_s").get_to(c.width_s);
  j.at("n_trades").get_to(c.n_trades);
  j.at("quote_volume").get_to(c.quote_volume);
  j.at("rush_volume").get_to(c.rush_volume);
  j.at("close").get_to(c.close);
  j.at("price_max").get_to(c.price_max);
  j.at("price_min").get_to(c.price_min);
}

void to_json(json& j, const FeatureVector& f) {
  j = json{{"chunk_start_ms", f.chunk_start_ms}, {"label", f.label}};
  const auto values = f.features();
  const auto& names = FeatureVector::feature_names();
  for (std::size_t i = 0; i < values.size(); ++i) j[std::string(names[i])] = values[i];
}

void from_json(const json& j, FeatureVector& f) {
  j.at("chunk_start_ms").get_to(f.chunk_start_ms);
  j.at("label").get_to(f.label);
  j.at("std_rush_orders").get_to(f.std_rush_orders);
  j.at("avg_rush_orders").get_to(f.avg_rush_orders);
  j.at("std_trades").get_to(f.std_trades);
  j.at("std_volumes").get_to(f.std_volumes);
  j.at("avg_volumes").get_to(f.avg_volumes);
  j.at("std_price").get_to(f.std_price);
  j.at("avg_price").get_to(f.avg_price);
  j.at("avg_price_max").get_to(f.avg_price_max);
  j.at("avg_price_min").get_to(f.avg_price_min);
}

void to_json(json& j, const PumpEvent& e) {
  j = json{{"symbol", e.symbol},
           {"exchange", e.exchange},
           {"signal_ts_ms", e.signal_ts_ms},
           {"group", e.group}};
}

void from_json(const json& j, PumpEvent& e) {
  j.at("symbol").get_to(e.symbol);
  j.at("exchange").get_to(e.exchange);
  j.at("signal_ts_ms").get_to(e.signal_ts_ms);
  e.group = j.value("group", "");
}

void to_json(json& j, const PipelineConfig& c) {
  j = json{{"chunk_seconds", c.chunk_seconds},
           {"window_seconds", c.window_seconds},
           {"cooldown_seconds", c.cooldown_seconds},
           {"window_includes_current", c.window_includes_current}};
}

void from_json(const json& j, PipelineConfig& c) {
  c.chunk_seconds = j.value("chunk_seconds", c.chunk_seconds);
  c.window_seconds = j.value("window_seconds", c.window_seconds);
  c.cooldown_seconds = j.value("cooldown_seconds", c.cooldown_seconds);
  c.window_includes_current = j.value("window_includes_current", c.window_includes_current);
}

void to_json(json& j, const DetectionAlert& a) {
  j = json{{"symbol", a.symbol},
           {"chunk_start_ms", a.chunk_start_ms},
           {"score", a.score},
           {"model_id", a.model_id}};
}

void from_json(const json& j, DetectionAlert& a) {
  j.at("symbol").get_to(a.symbol);
  j.at("chunk_start_ms").get_to(a.chunk_start_ms);
  j.at("score").get_to(a.score);
  j.at("model_id").get_to(a.model_id);
}

std::string alert_to_jsonl(const DetectionAlert& alert) {
  json j = alert;
  return j.dump();
}

}  // namespace pumpwatch

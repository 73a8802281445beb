#pragma once

#include "json.hpp"

#include "pumpwatch/core/types.hpp"

namespace pumpwatch {

using json = nlohmann::json;

void to_json(json& j, const TradeRecord& t);
void from_json(const json& j, TradeRecord& t);

void to_json(json& j, const RushOrder& r);
void from_json(const json& j, RushOrder& r);

void to_json(json& j, const Chunk& c);
void from_json(const json& j, Chunk& c);

void to_json(json& j, const FeatureVector& f);
void from_json(const json& j, FeatureVector& f);

void to_json(json& j, const PumpEvent& e);
void from_json(const json& j, PumpEvent& e);

void to_json(json& j, const PipelineConfig& c);
void from_json(const json& j, PipelineConfig& c);

void to_json(json& j, const DetectionAlert& a);
void from_json(const json& j, DetectionAlert& a);

/// One alert as a JSON line (no trailing newline).
std::string alert_to_jsonl(const DetectionAlert& alert);

}  // namespace pumpwatch

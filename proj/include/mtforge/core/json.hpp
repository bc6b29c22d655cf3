#pragma once

// JSON mapping for the shared domain types. Field names are the canonical
// wire names: metric_id, value, direction, choice, rationale, category,
// reasoning, readability, turns, role, text, source_dataset.

#include <nlohmann/json.hpp>

#include "mtforge/core/types.hpp"

namespace mtforge {

using Json = nlohmann::json;

void to_json(Json& j, const LanguageTag& t);
void to_json(Json& j, const MetricScore& s);
void from_json(const Json& j, MetricScore& s);
void from_json(const Json& j, JudgeVerdict& v);
void to_json(Json& j, const ScoreBundle& b);
void to_json(Json& j, const Turn& t);
void from_json(const Json& j, Turn& t);
void to_json(Json& j, const Conversation& c);

// Rationales are dropped unless asked for; released data may not want them.
Json verdict_to_json(const JudgeVerdict& v, bool include_rationale);

Choice parse_choice(std::string_view text);

// Field accessors that raise DataError naming the missing or mistyped field.
const Json& field(const Json& j, std::string_view name);
std::string string_field(const Json& j, std::string_view name);
std::optional<std::string> optional_string_field(const Json& j, std::string_view name);

}  // namespace mtforge

namespace nlohmann {

template <>
struct adl_serializer<mtforge::LanguageTag> {
  static mtforge::LanguageTag from_json(const json& j);
  static void to_json(json& j, const mtforge::LanguageTag& t) { mtforge::to_json(j, t); }
};

template <>
struct adl_serializer<mtforge::ScoreBundle> {
  static mtforge::ScoreBundle from_json(const json& j);
  static void to_json(json& j, const mtforge::ScoreBundle& b) { mtforge::to_json(j, b); }
};

template <>
struct adl_serializer<mtforge::Conversation> {
  static mtforge::Conversation from_json(const json& j);
  static void to_json(json& j, const mtforge::Conversation& c) { mtforge::to_json(j, c); }
};

}  // namespace nlohmann

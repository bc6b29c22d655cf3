#include "mtforge/core/json.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge {

const Json& field(const Json& j, std::string_view name) {
  if (!j.is_object()) fail(ErrorCode::DataError, "expected a JSON object");
  const auto it = j.find(std::string(name));
  if (it == j.end()) fail(ErrorCode::DataError, "missing field '" + std::string(name) + "'");
  return *it;
}

std::string string_field(const Json& j, std::string_view name) {
  const Json& v = field(j, name);
  if (!v.is_string()) fail(ErrorCode::DataError, "field '" + std::string(name) + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string_field(const Json& j, std::string_view name) {
  if (!j.is_object()) return std::nullopt;
  const auto it = j.find(std::string(name));
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(ErrorCode::DataError, "field '" + std::string(name) + "' must be a string");
  return it->get<std::string>();
}

void to_json(Json& j, const LanguageTag& t) {
  j = Json{{"code", t.code()}, {"display_name", t.display_name()}};
}

void to_json(Json& j, const MetricScore& s) {
  j = Json{{"metric_id", s.metric_id}, {"value", s.value}, {"direction", to_string(s.direction)}};
}

void from_json(const Json& j, MetricScore& s) {
  s.metric_id = string_field(j, "metric_id");
  const Json& v = field(j, "value");
  if (!v.is_number()) fail(ErrorCode::DataError, "field 'value' must be a number");
  s.value = v.get<double>();
  s.direction = parse_direction(string_field(j, "direction"));
  require(!s.metric_id.empty(), ErrorCode::DataError, "metric_id is empty");
}

Choice parse_choice(std::string_view text) {
  const std::string t = to_lower(trim(text));
  if (t == "a" || t == "[a]") return Choice::A;
  if (t == "b" || t == "[b]") return Choice::B;
  if (t == "t" || t == "[t]" || t == "tie") return Choice::Tie;
  fail(ErrorCode::DataError, "unknown choice '" + std::string(text) + "'");
}

Json verdict_to_json(const JudgeVerdict& v, bool include_rationale) {
  Json j{{"choice", std::string(to_string(v.choice))}};
  if (include_rationale) j["rationale"] = v.rationale;
  return j;
}

void from_json(const Json& j, JudgeVerdict& v) {
  v.choice = parse_choice(string_field(j, "choice"));
  v.rationale = optional_string_field(j, "rationale").value_or("");
}

void to_json(Json& j, const ScoreBundle& b) {
  j = Json{{"category", std::string(to_string(b.category()))},
           {"reasoning", b.reasoning()},
           {"readability", b.readability()}};
  if (!b.category_recognized()) j["category_unrecognized"] = true;
}

void to_json(Json& j, const Turn& t) {
  j = Json{{"role", std::string(to_string(t.role))}, {"text", t.text}};
}

void from_json(const Json& j, Turn& t) {
  t.role = parse_role(string_field(j, "role"));
  t.text = string_field(j, "text");
}

void to_json(Json& j, const Conversation& c) {
  j = Json{{"turns", c.turns()}, {"source_dataset", c.source_dataset()}};
}

}  // namespace mtforge

namespace nlohmann {

mtforge::LanguageTag adl_serializer<mtforge::LanguageTag>::from_json(const json& j) {
  return mtforge::LanguageTag(mtforge::string_field(j, "code"),
                              mtforge::string_field(j, "display_name"));
}

mtforge::ScoreBundle adl_serializer<mtforge::ScoreBundle>::from_json(const json& j) {
  const auto match = mtforge::match_category(mtforge::string_field(j, "category"));
  const auto score = [&](std::string_view name) {
    const json& v = mtforge::field(j, name);
    if (!v.is_number_integer()) {
      mtforge::fail(mtforge::ErrorCode::DataError, "field '" + std::string(name) + "' must be an integer");
    }
    return v.get<int>();
  };
  return mtforge::ScoreBundle(match.category, score("reasoning"), score("readability"),
                              match.recognized && !j.value("category_unrecognized", false));
}

mtforge::Conversation adl_serializer<mtforge::Conversation>::from_json(const json& j) {
  const json& turns = mtforge::field(j, "turns");
  if (!turns.is_array()) mtforge::fail(mtforge::ErrorCode::DataError, "field 'turns' must be an array");
  return mtforge::Conversation(turns.get<std::vector<mtforge::Turn>>(),
                               mtforge::optional_string_field(j, "source_dataset").value_or(""));
}

}  // namespace nlohmann

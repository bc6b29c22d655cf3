#include "mtforge/prefs/pair.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge::prefs {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::MBR: return "mbr";
    case Provenance::PostEdit: return "post_edit";
    case Provenance::Annotation: return "annotation";
    case Provenance::OnPolicy: return "on_policy";
    case Provenance::OffPolicy: return "off_policy";
  }
  return "?";
}

Provenance parse_provenance(std::string_view text) {
  for (auto p : {Provenance::MBR, Provenance::PostEdit, Provenance::Annotation, Provenance::OnPolicy,
                 Provenance::OffPolicy}) {
    if (to_string(p) == text) return p;
  }
  fail(ErrorCode::DataError, "unknown provenance: " + std::string(text));
}

void PreferencePair::validate() const {
  require(!chosen.empty() && !rejected.empty(), ErrorCode::InvalidArgument, id + ": empty side");
  require(chosen != rejected, ErrorCode::InvalidArgument, id + ": chosen equals rejected");
  for (const auto& c : checks) {
    require(c.passed, ErrorCode::InvalidArgument, id + ": failed check " + c.checker_id);
  }
}

Json to_json(const PreferencePair& p) {
  Json checks = Json::array();
  for (const auto& c : p.checks) checks.push_back({{"checker_id", c.checker_id}, {"passed", c.passed}});
  return Json{{"id", p.id},
              {"prompt", p.prompt},
              {"chosen", p.chosen},
              {"rejected", p.rejected},
              {"provenance", to_string(p.provenance)},
              {"checks", std::move(checks)}};
}

PreferencePair preference_pair_from_json(const Json& j) {
  std::optional<Conversation> prompt;
  try {
    prompt = field(j, "prompt").get<Conversation>();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, "prompt: " + e.detail());
  } catch (const Json::exception& e) {
    fail(ErrorCode::DataError, std::string("prompt: ") + e.what());
  }
  PreferencePair p{optional_string_field(j, "id").value_or(""), std::move(*prompt), string_field(j, "chosen"),
                   string_field(j, "rejected"), parse_provenance(optional_string_field(j, "provenance").value_or("mbr")),
                   {}};
  if (j.contains("checks")) {
    for (const auto& c : j.at("checks")) {
      require(c.contains("passed") && c.at("passed").is_boolean(), ErrorCode::DataError, "check needs boolean 'passed'");
      p.checks.push_back({string_field(c, "checker_id"), c.at("passed").get<bool>()});
    }
  }
  return p;
}

}  // namespace mtforge::prefs

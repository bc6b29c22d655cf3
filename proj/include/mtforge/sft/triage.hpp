#pragma once

#include <set>
#include <string>
#include <string_view>

#include "mtforge/core/types.hpp"
#include "mtforge/gateway/gateway.hpp"

namespace mtforge::sft {

std::string build_triage_prompt(const Conversation& conversation);

// Reads the last "Category:", "Reasoning:" and "Readability:" lines,
// case-insensitively, ignoring markdown emphasis and surrounding prose.
// Scores may be written "4", "4/5" or "4 out of 5". Unknown categories map
// to Other with category_recognized() false. Throws ParseFailure whose detail
// lists every unrecoverable field.
ScoreBundle parse_triage(std::string_view judge_output);

ScoreBundle triage(const Conversation& conversation, gateway::Gateway& gw, const std::string& judge_endpoint);

inline const std::set<std::string, std::less<>>& default_allowlist() {
  static const std::set<std::string, std::less<>> kAllow = {"OpenHermes-2.5"};
  return kAllow;
}

inline constexpr int kKeepThreshold = 4;

bool keep_record(const ScoreBundle& scores, std::string_view source_dataset,
                 const std::set<std::string, std::less<>>& allowlist = default_allowlist(),
                 int threshold = kKeepThreshold);

}  // namespace mtforge::sft

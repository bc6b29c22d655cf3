#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"

namespace mtforge::sft {

struct CandidateAnswer {
  std::string teacher_id;  // opaque label
  std::string text;
  std::optional<double> reward;
  std::string failure;  // why scoring failed, empty otherwise
};

struct SftRecord {
  std::string id;
  Conversation conversation;
  std::string task;  // free tag, e.g. "ape", "ner"; empty for general chat
  std::optional<ScoreBundle> scores;
  std::vector<CandidateAnswer> candidates;
  std::optional<std::size_t> selected_index;
  std::optional<int> translation_score;  // 1..5 from the translation judge

  // Throws InvalidArgument when selected_index is out of range or not an
  // argmax of the candidate rewards, or a candidate has empty text.
  void validate() const;
  const CandidateAnswer* selected() const;
};

Json to_json(const SftRecord& r);
// Throws DataError on missing or mistyped fields.
SftRecord sft_record_from_json(const Json& j);

// Turns up to and including the last user turn: the context every candidate
// answers.
Conversation prompt_context(const Conversation& c);

}  // namespace mtforge::sft

#include "mtforge/sft/record.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge::sft {

void SftRecord::validate() const {
  for (const auto& c : candidates) {
    require(!c.text.empty(), ErrorCode::InvalidArgument, id + ": candidate from " + c.teacher_id + " has empty text");
  }
  if (!selected_index) return;
  require(*selected_index < candidates.size(), ErrorCode::InvalidArgument, id + ": selected_index out of range");
  const auto& pick = candidates[*selected_index];
  require(pick.reward.has_value(), ErrorCode::InvalidArgument, id + ": selected candidate has no reward");
  for (const auto& c : candidates) {
    require(!c.reward || *c.reward <= *pick.reward, ErrorCode::InvalidArgument,
            id + ": selected candidate is not an argmax");
  }
}

const CandidateAnswer* SftRecord::selected() const {
  return selected_index ? &candidates.at(*selected_index) : nullptr;
}

Json to_json(const SftRecord& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    Json cj{{"teacher_id", c.teacher_id}, {"text", c.text}};
    if (c.reward) cj["reward"] = *c.reward;
    if (!c.failure.empty()) cj["failure"] = c.failure;
    cands.push_back(std::move(cj));
  }
  Json j{{"id", r.id}, {"conversation", r.conversation}, {"candidates", std::move(cands)}};
  if (!r.task.empty()) j["task"] = r.task;
  if (r.scores) j["scores"] = *r.scores;
  if (r.selected_index) {
    j["selected_index"] = *r.selected_index;
    j["response"] = r.candidates[*r.selected_index].text;
  }
  if (r.translation_score) j["translation_score"] = *r.translation_score;
  return j;
}

SftRecord sft_record_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::DataError, "record must be a JSON object");
  std::optional<Conversation> conv;
  try {
    conv = field(j, "conversation").get<Conversation>();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, "conversation: " + e.detail());
  } catch (const Json::exception& e) {
    fail(ErrorCode::DataError, std::string("conversation: ") + e.what());
  }
  SftRecord r{optional_string_field(j, "id").value_or(""), std::move(*conv), optional_string_field(j, "task").value_or(""),
              std::nullopt, {}, std::nullopt, std::nullopt};
  if (j.contains("candidates")) {
    const auto& cands = j.at("candidates");
    require(cands.is_array(), ErrorCode::DataError, "candidates must be an array");
    for (const auto& c : cands) {
      CandidateAnswer a{string_field(c, "teacher_id"), string_field(c, "text"), std::nullopt, ""};
      require(!a.text.empty(), ErrorCode::DataError, "candidate " + a.teacher_id + " has empty text");
      if (c.contains("reward")) {
        require(c.at("reward").is_number(), ErrorCode::DataError, "reward must be a number");
        a.reward = c.at("reward").get<double>();
      }
      r.candidates.push_back(std::move(a));
    }
  }
  if (j.contains("scores")) {
    try {
      r.scores = j.at("scores").get<ScoreBundle>();
    } catch (const Error& e) {
      fail(ErrorCode::DataError, "scores: " + e.detail());
    }
  }
  return r;
}

Conversation prompt_context(const Conversation& c) {
  auto turns = c.turns();
  while (turns.back().role != Role::User) turns.pop_back();
  return Conversation(std::move(turns), c.source_dataset());
}

}  // namespace mtforge::sft

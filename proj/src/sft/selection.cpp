#include "mtforge/sft/selection.hpp"

#include <algorithm>

#include "mtforge/core/error.hpp"

namespace mtforge::sft {

void gather_candidates(SftRecord& record, gateway::Gateway& gw, const std::vector<std::string>& teacher_endpoints) {
  const auto& turns = record.conversation.turns();
  const bool has_original = std::any_of(record.candidates.begin(), record.candidates.end(),
                                        [](const auto& c) { return c.teacher_id == "original"; });
  if (!has_original && turns.back().role == Role::Assistant && !turns.back().text.empty()) {
    record.candidates.insert(record.candidates.begin(), {"original", turns.back().text, std::nullopt, ""});
  }
  if (teacher_endpoints.empty()) return;
  const auto context = prompt_context(record.conversation);
  std::vector<gateway::Message> messages;
  for (const auto& t : context.turns()) messages.push_back({std::string(to_string(t.role)), t.text});
  for (const auto& teacher : teacher_endpoints) {
    gateway::GenerationRequest req;
    req.endpoint_id = teacher;
    req.prompt_messages = messages;
    auto text = gw.generate(req).front();
    if (!text.empty()) record.candidates.push_back({teacher, std::move(text), std::nullopt, ""});
  }
}

std::size_t argmax_reward(const std::vector<CandidateAnswer>& candidates) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].reward) continue;
    if (!best || *candidates[i].reward > *candidates[*best].reward) best = i;
  }
  if (!best) fail(ErrorCode::AllCandidatesFailed, "no candidate could be scored");
  return *best;
}

void select_answer(SftRecord& record, gateway::Gateway& gw, const std::string& reward_endpoint) {
  require(!record.candidates.empty(), ErrorCode::PreconditionViolation, record.id + ": no candidates");
  const auto context = prompt_context(record.conversation);
  for (auto& c : record.candidates) {
    if (c.reward) continue;  // scored upstream
    try {
      c.reward = gw.score_reward(reward_endpoint, context, c.text);
      c.failure.clear();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MalformedResponse) throw;
      c.failure = e.detail();
    }
  }
  try {
    record.selected_index = argmax_reward(record.candidates);
  } catch (const Error& e) {
    fail(e.code(), record.id + ": " + e.detail());
  }
}

}  // namespace mtforge::sft

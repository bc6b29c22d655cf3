#include "mtforge/eval/winrate.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/prefs/double_check.hpp"
#include "mtforge/prefs/verdict.hpp"

namespace mtforge::eval {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Win: return "win";
    case Outcome::Loss: return "loss";
    case Outcome::Tie: return "tie";
  }
  return "tie";
}

Outcome parse_outcome(std::string_view text) {
  if (text == "win") return Outcome::Win;
  if (text == "loss") return Outcome::Loss;
  if (text == "tie") return Outcome::Tie;
  fail(ErrorCode::InvalidArgument, "unknown outcome " + std::string(text));
}

Outcome flipped(Outcome o) {
  if (o == Outcome::Win) return Outcome::Loss;
  if (o == Outcome::Loss) return Outcome::Win;
  return Outcome::Tie;
}

double win_rate(const std::vector<Outcome>& outcomes, double tie_credit) {
  require(!outcomes.empty(), ErrorCode::EmptyOutcomes, "win_rate needs at least one outcome");
  require(tie_credit >= 0.0 && tie_credit <= 1.0, ErrorCode::InvalidArgument, "tie credit must be in [0, 1]");
  double wins = 0, ties = 0;
  for (const auto o : outcomes) {
    wins += o == Outcome::Win;
    ties += o == Outcome::Tie;
  }
  return (wins + tie_credit * ties) / static_cast<double>(outcomes.size());
}

ArenaItem arena_item_from_json(const Json& j) {
  ArenaItem item;
  item.id = string_field(j, "id");
  item.instruction = string_field(j, "prompt");
  item.candidate = string_field(j, "candidate");
  item.baseline = string_field(j, "baseline");
  item.language = optional_string_field(j, "lang").value_or("");
  return item;
}

ArenaJudgement judge_arena(const ArenaItem& item, gateway::Gateway& gw, const std::string& judge_endpoint,
                           std::uint64_t seed) {
  ArenaJudgement out;
  out.candidate_shown_as_a = prefs::chosen_presented_first(item.candidate, item.baseline, seed);
  const auto& a = out.candidate_shown_as_a ? item.candidate : item.baseline;
  const auto& b = out.candidate_shown_as_a ? item.baseline : item.candidate;
  out.verdict = prefs::parse_chosen_verdict(gw.complete(judge_endpoint, prefs::build_preference_judge_prompt(item.instruction, a, b)));
  if (out.verdict.choice == Choice::Tie) {
    out.outcome = Outcome::Tie;
  } else {
    const bool picked_a = out.verdict.choice == Choice::A;
    out.outcome = picked_a == out.candidate_shown_as_a ? Outcome::Win : Outcome::Loss;
  }
  return out;
}

}  // namespace mtforge::eval

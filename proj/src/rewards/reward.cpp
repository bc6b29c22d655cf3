#include "mtforge/rewards/reward.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/prefs/double_check.hpp"
#include "mtforge/prefs/verdict.hpp"

namespace mtforge::rewards {

std::string to_string(RewardMode m) { return m == RewardMode::Strict ? "strict" : "fractional"; }

RewardMode parse_reward_mode(std::string_view text) {
  if (text == "strict") return RewardMode::Strict;
  if (text == "fractional") return RewardMode::Fractional;
  fail(ErrorCode::InvalidArgument, "reward mode must be strict or fractional, got " + std::string(text));
}

Json to_json(const RewardOutcome& o) {
  Json per = Json::array();
  for (const auto& [id, matched] : o.per_guideline) per.push_back({{"guideline_id", id}, {"matched", matched}});
  return Json{{"value", o.value}, {"mode", to_string(o.mode)}, {"per_guideline", std::move(per)}};
}

RewardOutcome translation_reward(const guideline::VerifiableSample& sample, std::string_view model_output,
                                 RewardMode mode) {
  using guideline::SampleState;
  require(sample.state() != SampleState::Generated && sample.state() != SampleState::Rejected,
          ErrorCode::PreconditionViolation, "sample must be source-verified and not rejected");
  return translation_reward(sample.bundle().guidelines, model_output, mode);
}

RewardOutcome translation_reward(const std::vector<guideline::GuidelineSpec>& guidelines,
                                 std::string_view model_output, RewardMode mode) {
  require(!model_output.empty(), ErrorCode::PreconditionViolation, "empty model output");
  require(!guidelines.empty(), ErrorCode::PreconditionViolation, "sample has no guidelines");
  RewardOutcome o;
  o.mode = mode;
  std::size_t matched = 0;
  for (const auto& g : guidelines) {
    const bool ok = g.matches(model_output);
    matched += ok;
    o.per_guideline.emplace_back(g.id, ok);
  }
  if (mode == RewardMode::Strict) {
    o.value = matched == guidelines.size() ? 1.0 : 0.0;
  } else {
    o.value = static_cast<double>(matched) / static_cast<double>(guidelines.size());
  }
  return o;
}

std::string PreferenceEvalItem::prompt() const {
  const auto& a = chosen_is_a ? pair.chosen : pair.rejected;
  const auto& b = chosen_is_a ? pair.rejected : pair.chosen;
  return prefs::build_preference_judge_prompt(pair.prompt.last_user_text(), a, b);
}

PreferenceEvalItem make_preference_eval_item(prefs::PreferencePair pair, std::uint64_t seed) {
  pair.validate();
  const bool first = prefs::chosen_presented_first(pair.chosen, pair.rejected, seed);
  return {std::move(pair), first};
}

PreferenceReward preference_eval_reward(const PreferenceEvalItem& item, std::string_view model_verdict_text) {
  JudgeVerdict verdict;
  try {
    verdict = prefs::parse_chosen_verdict(model_verdict_text);
  } catch (const Error& e) {
    return {0.0, std::string(mtforge::to_string(e.code())) + ": " + e.detail()};
  }
  if (verdict.choice == Choice::Tie) return {0.0, "tie"};
  const auto chosen_slot = item.chosen_is_a ? Choice::A : Choice::B;
  if (verdict.choice != chosen_slot) return {0.0, "wrong side"};
  return {1.0, ""};
}

Json to_json(const PreferenceEvalItem& item) {
  Json j = prefs::to_json(item.pair);
  j["chosen_position"] = item.chosen_is_a ? "A" : "B";
  j["judge_prompt"] = item.prompt();
  return j;
}

PreferenceEvalItem preference_eval_item_from_json(const Json& j) {
  auto pair = prefs::preference_pair_from_json(j);
  const auto pos = string_field(j, "chosen_position");
  require(pos == "A" || pos == "B", ErrorCode::DataError, "chosen_position must be A or B");
  require(!pair.chosen.empty() && pair.chosen != pair.rejected, ErrorCode::DataError,
          "preference item needs distinct chosen and rejected");
  return {std::move(pair), pos == "A"};
}

}  // namespace mtforge::rewards

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/guideline/sample.hpp"
#include "mtforge/prefs/pair.hpp"

namespace mtforge::rewards {

enum class RewardMode { Strict, Fractional };

std::string to_string(RewardMode m);
RewardMode parse_reward_mode(std::string_view text);

struct RewardOutcome {
  double value = 0.0;
  std::vector<std::pair<std::string, bool>> per_guideline;
  RewardMode mode = RewardMode::Strict;
};

Json to_json(const RewardOutcome& o);

// Sample must have passed source verification and not be Rejected; the
// output must be non-empty. Strict: 1 iff every guideline regex matches.
// Fractional: matched / total.
RewardOutcome translation_reward(const guideline::VerifiableSample& sample, std::string_view model_output,
                                 RewardMode mode = RewardMode::Strict);
// Same check against a bare guideline list; an empty list is a precondition violation.
RewardOutcome translation_reward(const std::vector<guideline::GuidelineSpec>& guidelines,
                                 std::string_view model_output, RewardMode mode = RewardMode::Strict);

// A preference pair shown to the policy with a fixed A/B assignment.
struct PreferenceEvalItem {
  prefs::PreferencePair pair;
  bool chosen_is_a = true;

  std::string prompt() const;  // the judge prompt the policy answers
};

PreferenceEvalItem make_preference_eval_item(prefs::PreferencePair pair, std::uint64_t seed);

struct PreferenceReward {
  double value = 0.0;  // 1 iff the verdict names the chosen side
  std::string reason;  // empty on success; "tie", "wrong side" or the parse failure
};

PreferenceReward preference_eval_reward(const PreferenceEvalItem& item, std::string_view model_verdict_text);

Json to_json(const PreferenceEvalItem& item);
PreferenceEvalItem preference_eval_item_from_json(const Json& j);

}  // namespace mtforge::rewards

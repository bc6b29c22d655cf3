#include "mtforge/prefs/double_check.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"
#include "mtforge/prefs/verdict.hpp"

namespace mtforge::prefs {

bool chosen_presented_first(std::string_view chosen, std::string_view rejected, std::uint64_t seed) {
  std::string key(chosen);
  key += '\x1f';
  key += rejected;
  return (stable_hash(key, seed) & 1u) == 0;
}

DoubleCheckResult double_check(const DoubleCheckInput& in, gateway::Gateway& gw, const DoubleCheckConfig& config) {
  require(in.chosen != in.rejected, ErrorCode::PreconditionViolation, "chosen equals rejected");
  DoubleCheckResult r;
  const auto chosen_score = gw.score_quality(config.metric_endpoint, {in.source_text, in.chosen, in.reference, ""});
  const auto rejected_score = gw.score_quality(config.metric_endpoint, {in.source_text, in.rejected, in.reference, ""});
  const bool metric_ok = compare_scores(chosen_score, rejected_score) == Comparison::ABetter;
  r.checks.push_back({"metric:" + chosen_score.metric_id, metric_ok});
  if (!metric_ok) return r;

  r.chosen_shown_as_a = chosen_presented_first(in.chosen, in.rejected, config.seed);
  const auto& a = r.chosen_shown_as_a ? in.chosen : in.rejected;
  const auto& b = r.chosen_shown_as_a ? in.rejected : in.chosen;
  r.verdict = parse_chosen_verdict(gw.complete(config.judge_endpoint, build_preference_judge_prompt(in.instruction, a, b)));
  const auto chosen_slot = r.chosen_shown_as_a ? Choice::A : Choice::B;
  const bool judge_ok = r.verdict->choice == chosen_slot;
  r.checks.push_back({"judge:" + config.judge_endpoint, judge_ok});
  r.passed = judge_ok;
  return r;
}

}  // namespace mtforge::prefs

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"
#include "mtforge/gateway/gateway.hpp"

namespace mtforge::eval {

enum class Outcome { Win, Loss, Tie };

std::string to_string(Outcome o);
Outcome parse_outcome(std::string_view text);  // "win", "loss", "tie"; InvalidArgument otherwise
Outcome flipped(Outcome o);

// (wins + tie_credit * ties) / total. EmptyOutcomes on an empty list.
double win_rate(const std::vector<Outcome>& outcomes, double tie_credit = 0.5);

// One pairwise comparison of a system answer against the fixed baseline.
struct ArenaItem {
  std::string id;
  std::string instruction;
  std::string candidate;
  std::string baseline;
  std::string language;  // optional grouping tag
};

ArenaItem arena_item_from_json(const Json& j);  // DataError

struct ArenaJudgement {
  Outcome outcome = Outcome::Tie;
  JudgeVerdict verdict;
  bool candidate_shown_as_a = true;
};

// Uses the pairwise "Chosen: [A/B/T]" judge prompt with a seeded A/B
// assignment. Unparseable verdicts throw ParseFailure.
ArenaJudgement judge_arena(const ArenaItem& item, gateway::Gateway& gw, const std::string& judge_endpoint,
                           std::uint64_t seed);

}  // namespace mtforge::eval

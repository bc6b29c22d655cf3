#pragma once

#include <string>
#include <vector>

#include "mtforge/gateway/gateway.hpp"
#include "mtforge/sft/record.hpp"

namespace mtforge::sft {

// Asks each teacher endpoint for one answer (temperature 0) and appends it.
// If the conversation ends with an assistant turn and the record has no
// "original" candidate yet, that turn is added first as teacher "original".
void gather_candidates(SftRecord& record, gateway::Gateway& gw, const std::vector<std::string>& teacher_endpoints);

// Index of the highest reward, lowest index on ties; unscored entries are
// ignored. Throws AllCandidatesFailed when nothing is scored.
std::size_t argmax_reward(const std::vector<CandidateAnswer>& candidates);

// Scores every candidate once against the prompt context and sets
// selected_index. Malformed reward responses mark the candidate failed and
// skip it; other gateway errors propagate.
void select_answer(SftRecord& record, gateway::Gateway& gw, const std::string& reward_endpoint);

}  // namespace mtforge::sft

#pragma once

#include <string>
#include <string_view>

#include "mtforge/gateway/gateway.hpp"

namespace mtforge::sft {

std::string build_translation_score_prompt(std::string_view instruction, std::string_view answer);

// Integer after the last "Final Score:" marker, 1..5. Throws ParseFailure.
int parse_final_score(std::string_view judge_output);

int score_translation_answer(std::string_view instruction, std::string_view answer, gateway::Gateway& gw,
                             const std::string& judge_endpoint);

}  // namespace mtforge::sft

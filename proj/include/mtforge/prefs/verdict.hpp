#pragma once

#include <string>
#include <string_view>

#include "mtforge/core/types.hpp"

namespace mtforge::prefs {

// Uses the last "Chosen:" marker; the token is A, B or T, optionally in
// brackets. The rationale is the text before that marker. Strict mode also
// rejects an empty rationale. Throws ParseFailure.
JudgeVerdict parse_chosen_verdict(std::string_view judge_output, bool strict = false);

std::string build_preference_judge_prompt(std::string_view instruction, std::string_view response_a,
                                          std::string_view response_b);

}  // namespace mtforge::prefs

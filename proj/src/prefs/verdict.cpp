#include "mtforge/prefs/verdict.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/json.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::prefs {

namespace {

constexpr std::string_view kJudgeHead = R"P(Please act as an impartial judge and evaluate the quality of the translations provided by two AI assistants in response to the user's request below. Select the assistant that best adheres to the user's instructions while producing the highest-quality translation overall. If the user's instructions specify particular factors—such as the required level of formality, glossaries, or adherence to provided examples—ensure these are included in your evaluation. Begin by comparing the two translations and provide a concise explanation of your assessment. Avoid personal opinions or biases, and do not favour one assistant over the other. Be objective and impartial.

After providing your explanation, deliver your final verdict strictly in this format:

Chosen: <[A] if Assistant A is better, [B] if Assistant B is better, or [T] if both are equally good or bad.>

[User Instruction]

)P";

}  // namespace

JudgeVerdict parse_chosen_verdict(std::string_view judge_output, bool strict) {
  constexpr std::string_view kKey = "chosen:";
  std::string text;
  for (char c : judge_output) {
    if (c != '*') text += c;
  }
  const auto pos = rfind_icase(text, kKey);
  if (pos == std::string::npos) fail(ErrorCode::ParseFailure, "Chosen marker absent");
  auto v = std::string_view(text).substr(pos + kKey.size());
  v = trim(v.substr(0, v.find('\n')));
  if (!v.empty() && v.back() == '.') v.remove_suffix(1);
  Choice choice;
  try {
    choice = parse_choice(v);
  } catch (const Error&) {
    // Lenient mode also takes "[A] because ..." by its first token.
    const auto first = v.substr(0, v.find_first_of(" \t"));
    try {
      if (strict || first.size() == v.size()) throw;
      choice = parse_choice(first);
    } catch (const Error&) {
      fail(ErrorCode::ParseFailure, "Chosen value must be A, B or T, got '" + std::string(v) + "'");
    }
  }
  JudgeVerdict verdict{choice, std::string(trim(std::string_view(text).substr(0, pos)))};
  if (strict && verdict.rationale.empty()) fail(ErrorCode::ParseFailure, "empty rationale");
  return verdict;
}

std::string build_preference_judge_prompt(std::string_view instruction, std::string_view response_a,
                                          std::string_view response_b) {
  std::string p(kJudgeHead);
  p += instruction;
  p += "\n\n[End of User Instruction]\n\n[Start of Assistant A's Response]\n\n";
  p += response_a;
  p += "\n\n[End of Assistant A's Response]\n\n[Start of Assistant B's Response]\n\n";
  p += response_b;
  p += "\n\n[End of Assistant B's Response]";
  return p;
}

}  // namespace mtforge::prefs

#include "mtforge/sft/translation_score.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::sft {

namespace {

constexpr std::string_view kHead = R"P(You are a professional translator and evaluator. Your task is to evaluate how well an assistant has handled a translation request from a user. Evaluate the translation based on the following criteria:

1. Adequacy (Accuracy of Meaning)
  - Assess whether the translation fully and accurately conveys the meaning of the source text.
  - Penalize mistranslations, omissions, or additions that distort the intended message.

2. Fluency (Readability & Grammar)
  - Ensure the translation reads naturally and is grammatically correct in the target language.
  - Penalize awkward phrasing, unnatural word choices, or structural issues.
  - It should be easy to read and understand, as if it were originally written in the target language.

3. Cultural Appropriateness
  - Ensure that the translation is culturally appropriate for the target audience.

4. Instructions Adherence
   - If provided, evaluate how well the translation adheres to any specific instructions or guidelines provided by the user. Otherwise, ignore this criterion.

Provide detailed feedback on any issues and suggest improvements. Conclude with a score from 1 to 5:

- 5 → Perfect translation (fully accurate and fluent in the target language while adhering to instructions).

- 4 → Good translation (minor errors but generally fluent and natural sounding) and adheres to instructions.

- 3 → Acceptable but flawed (some errors in meaning, fluency, or structure).

- 2 → Translation is acceptable but it does not adhere to the instructions.

- 1 → Poor translation (major errors affecting comprehension).

[User Instructions]

)P";

}  // namespace

std::string build_translation_score_prompt(std::string_view instruction, std::string_view answer) {
  std::string p(kHead);
  p += instruction;
  p += "\n\n[End of User Instructions]\n\n[Assistant Translation]\n\n";
  p += answer;
  p += "\n\n[End of Assistant Translation]\n\nNOTE: Your answer must terminate with the following format:\nFinal Score: <score>";
  return p;
}

int parse_final_score(std::string_view judge_output) {
  constexpr std::string_view kKey = "final score:";
  // Markdown bold may split the marker ("**Final Score:** 4").
  std::string text;
  for (char c : judge_output) {
    if (c != '*') text += c;
  }
  const auto pos = rfind_icase(text, kKey);
  if (pos == std::string::npos) fail(ErrorCode::ParseFailure, "Final Score marker absent");
  auto v = std::string_view(text).substr(pos + kKey.size());
  v = trim(v.substr(0, v.find('\n')));
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = trim(v.substr(1, v.size() - 2));
  if (v.size() > 2 && v.substr(v.size() - 2) == "/5") v = trim(v.substr(0, v.size() - 2));
  if (!v.empty() && v.back() == '.') v.remove_suffix(1);
  const auto n = parse_int(v);
  if (!n || *n < 1 || *n > 5) fail(ErrorCode::ParseFailure, "Final Score must be an integer in 1..5, got '" + std::string(v) + "'");
  return static_cast<int>(*n);
}

int score_translation_answer(std::string_view instruction, std::string_view answer, gateway::Gateway& gw,
                             const std::string& judge_endpoint) {
  return parse_final_score(gw.complete(judge_endpoint, build_translation_score_prompt(instruction, answer)));
}

}  // namespace mtforge::sft

#include "mtforge/guideline/prompts.hpp"

#include <algorithm>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::guideline {

namespace {

constexpr std::string_view kSourceMarker = "###SOURCE###";
constexpr std::string_view kGuidelinesMarker = "###GUIDELINES###";
constexpr std::string_view kEndMarker = "###END###";

constexpr std::string_view kGenerationHead = R"P(Requirements:
- The document must be EXACTLY the specified length
- Must naturally incorporate elements that match ALL guidelines
- Keep the text coherent and natural
- For paragraphs, use 2-3 sentences per paragraph
- Do not mention the guidelines explicitly in the text

Output format:
- ###SOURCE###
  [Your text here]
- ###GUIDELINES###
  [Copy the given guidelines exactly]
- ###END###

Here are two examples:

Example 1:
- LENGTH: 1 sentence
- TOPIC: Technology - Software Development
- GUIDELINES:
  1) [Date Formatting] Convert dates to MM/DD/YYYY
  2) [Terminology] Add full form in parentheses after acronyms

###SOURCE###
The AI team announced on March 15th that their new NLP system had achieved breakthrough performance in code generation.
###GUIDELINES###
1) Convert dates to MM/DD/YYYY, e.g., March 15th to 03/15/2022
2) Add full form 'Natural Language Processing' in parentheses after acronyms, e.g., NLP (Natural Language Processing)
###END###

Example 2:
- LENGTH: 1 paragraph
- TOPIC: Social Media - Digital Marketing
- GUIDELINES:
  1) [Case Formatting] Convert all text to lowercase
  2) [Social Media] Add hashtags at end of sentence for: brands (#brand), actions (#marketing)
  3) [Email Formatting] Convert email mentions to [EMAIL]address[/EMAIL]

###SOURCE###
Instagram and TikTok launched new advertising features last week. Digital marketers can now contact our support team at help@instagram.com for early access to these tools, while brands on TikTok are already reporting increased engagement rates.
###GUIDELINES###
1) Convert all text to lowercase
2) Add hashtags at end of sentence for: brands (#brand), actions (#marketing)
3) Convert email mentions to [EMAIL]address[/EMAIL]
###END###

Your task:
)P";

constexpr std::string_view kGenerationTail = R"P(
Important Instructions for Source Text:
1. Write a text that contains all necessary elements that COULD be transformed according to the guidelines, but deliberately does NOT follow the guidelines yet
2. For example:
   - If a guideline requires formatting dates as MM/DD/YYYY, write dates in a different format
   - If a guideline requires wrapping emails in tags, include email addresses without tags
   - If a guideline requires expanding acronyms, use acronyms without expansions
3. The text should be natural and coherent, reading as a normal document would
4. Make sure every guideline has corresponding elements in the text that can be transformed
5. Think of the source text as the "before" version that will later be transformed into an "after" version following the guideline
)P";

constexpr std::string_view kVerificationHead = R"P(You are an expert judge evaluating source documents that will be used for guideline-based text rewriting tasks. Your task is to carefully analyze whether a text follows any given guidelines. First, analyze each guideline carefully, then decide if the text follows ANY of the guidelines.

Example 1:
Guidelines:
1) [Email Format] Convert email to [EMAIL]address[/EMAIL]
2) [Case] Convert product names to UPPERCASE
Source Text: Contact us at help@company.com about the zenith software.

###EVALUATION###
Analysis:
Guideline 1 (Email Format):
- Text contains raw email "help@company.com"
- Email is NOT wrapped in [EMAIL] tags
- This guideline is NOT followed

Guideline 2 (Case):
- Text contains product name "zenith"
- Product name is in lowercase
- This guideline is NOT followed

Number of guidelines followed: 0/2
Guidelines Check: 0
###END###

Example 2:
Guidelines:
1) [Email Format] Convert email to [EMAIL]address[/EMAIL]
2) [Case] Convert product names to UPPERCASE
Source Text: Contact us at [EMAIL]help@company.com[/EMAIL] about the ZENITH software.

###EVALUATION###
Analysis:
Guideline 1 (Email Format):
- Text contains email wrapped in [EMAIL] tags [EMAIL]help@company.com[/EMAIL]
- This guideline is FOLLOWED

Guideline 2 (Case):
- Text contains product name "ZENITH" in UPPERCASE
- This guideline is FOLLOWED

Number of guidelines followed: 2/2
Guidelines Check: 1
###END###

Example 3:
Guidelines:
1) Convert month names to 3 letter abbreviations
2) Convert lists to 1., 2., format
Source Text: The meeting is scheduled for January 1st, 2023. The agenda includes: 1) Budget review, 2) Project updates.

###EVALUATION###
Analysis:
Guideline 1 (Month Abbreviations):
- Text contains full month name "January"
- Month is NOT in 3-letter format (should be "Jan")
- This guideline is NOT followed

Guideline 2 (List Format):
- Text contains list with format "1)" and "2)"
- Lists are NOT in "1." format
- This guideline is NOT followed

Number of guidelines followed: 0/2
Guidelines Check: 0
###END###

Now evaluate this input:
)P";

constexpr std::string_view kVerificationTail = R"P(
Your evaluation must:
1. Analyze each guideline separately and explicitly state if it's followed
2. Count the total guidelines followed
3. Conclude with a Guidelines Check score: Score 1 if ANY guideline is followed; Score 0 if NO guidelines are followed

Use exactly this format:
###EVALUATION###
Analysis: (Analysis of each guideline)
Number of guidelines followed: [X/Y] --- there is no such a thing as half a guideline, so X should be an integer between 0 and Y (also an integer)
Guidelines Check: [1 for ANY followed, 0 for NONE followed]
###END###)P";

std::string indent_lines(std::string_view text, std::string_view prefix) {
  std::string out;
  for (auto line : split_lines(text)) {
    out += prefix;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_guidelines(const GuidelineBundle& bundle) {
  std::string out;
  for (std::size_t i = 0; i < bundle.guidelines.size(); ++i) {
    const auto& g = bundle.guidelines[i];
    if (i > 0) out += '\n';
    out += std::to_string(i + 1) + ") [" + g.category + "] " + g.description;
    if (g.requires_example) out += ", e.g., " + g.example_input + " to " + g.example_output;
  }
  return out;
}

std::string build_generation_prompt(const GuidelineBundle& bundle) {
  bundle.validate();
  std::string prompt(kGenerationHead);
  prompt += "- LENGTH: " + to_string(bundle.length) + "\n";
  prompt += "- TOPIC: " + bundle.topic_label() + "\n";
  prompt += "- GUIDELINES:\n";
  prompt += indent_lines(format_guidelines(bundle), "  ");
  prompt += kGenerationTail;
  return prompt;
}

GenerationOutput parse_generation_output(std::string_view raw) {
  const auto s = raw.find(kSourceMarker);
  const auto g = raw.find(kGuidelinesMarker);
  const auto e = raw.find(kEndMarker);
  if (s == std::string_view::npos) fail(ErrorCode::MarkerMissing, "SOURCE");
  if (g == std::string_view::npos) fail(ErrorCode::MarkerMissing, "GUIDELINES");
  if (e == std::string_view::npos) fail(ErrorCode::MarkerMissing, "END");
  if (!(s < g && g < e)) fail(ErrorCode::MarkerMissing, "ORDER");
  const auto src_begin = s + kSourceMarker.size();
  const auto gl_begin = g + kGuidelinesMarker.size();
  return {std::string(trim(raw.substr(src_begin, g - src_begin))),
          std::string(trim(raw.substr(gl_begin, e - gl_begin)))};
}

std::string render_generation_output(const GenerationOutput& output) {
  return std::string(kSourceMarker) + "\n" + output.source_text + "\n" + std::string(kGuidelinesMarker) + "\n" +
         output.guidelines_text + "\n" + std::string(kEndMarker);
}

std::string build_verification_prompt(const GuidelineBundle& bundle, std::string_view guidelines_text,
                                       std::string_view source_text) {
  std::string prompt(kVerificationHead);
  prompt += "Topic: " + bundle.topic_label() + "\n";
  prompt += "Length: " + to_string(bundle.length) + "\n";
  prompt += "Guidelines: ";
  prompt += guidelines_text;
  prompt += "\nSource Text: ";
  prompt += source_text;
  prompt += "\n";
  prompt += kVerificationTail;
  return prompt;
}

int parse_guidelines_check(std::string_view judge_output) {
  constexpr std::string_view kKey = "guidelines check:";
  const auto pos = rfind_icase(judge_output, kKey);
  if (pos == std::string_view::npos) fail(ErrorCode::ParseFailure, "Guidelines Check line absent");
  auto rest = judge_output.substr(pos + kKey.size());
  rest = rest.substr(0, rest.find('\n'));
  std::string value(trim(rest));
  value.erase(std::remove(value.begin(), value.end(), '*'), value.end());
  std::string_view v = trim(value);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = trim(v.substr(1, v.size() - 2));
  const auto parsed = parse_int(v);
  if (!parsed || (*parsed != 0 && *parsed != 1)) {
    fail(ErrorCode::ParseFailure, "Guidelines Check value must be 0 or 1, got '" + std::string(v) + "'");
  }
  return static_cast<int>(*parsed);
}

std::string build_translation_prompt(std::string_view source_text, std::string_view source_language,
                                     std::string_view target_language) {
  std::string p = "Translate the following text from ";
  p += source_language;
  p += " into ";
  p += target_language;
  p += ".\n";
  p += source_language;
  p += ": ";
  p += source_text;
  p += "\n";
  p += target_language;
  p += ":";
  return p;
}

std::string build_apply_prompt(std::string_view guidelines_text, std::string_view translation,
                               std::string_view target_language) {
  std::string p = "Rewrite the ";
  p += target_language;
  p += " text below so that it follows every guideline. Change nothing else and reply with the rewritten text only.\n\nGuidelines:\n";
  p += guidelines_text;
  p += "\n\nText:\n";
  p += translation;
  return p;
}

}  // namespace mtforge::guideline

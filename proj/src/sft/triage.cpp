#include "mtforge/sft/triage.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::sft {

namespace {

constexpr std::string_view kTriageHead =
    "I have an conversation below that I would like you to perform three steps of analysis:\n\n<conversation>\n\n";

constexpr std::string_view kTriageTail = R"P(

</conversation>

Firstly, categorize the conversation above into one of the following categories.

- Coding

- Mathematical Reasoning

- Advice and Brainstorming

- Question Answering

- Creative Writing and Persona

- Text Correction or Rewriting

- Summarization

- Translation

- Classification

- Other

Don't try to justify it and when two categories can be used, pick the primary caregory.

Secondly, score the conversation in terms of reasoning: How complex you think it is to answer the user instructions from 1-5 (where 5 is a conversation with complex instructions/questions where the assistant needs to break down the problem into multiple steps before providing an answer).

Thirdly, since the conversation might have been artificially created or poorly translated, assess its readability and clarity. Rate how difficult it is to understand the user's requests on a scale of 1 to 5, with 5 representing well-written, clear, and precisely articulated requests, and 1 representing an conversation where the user turns are difficult to understand.
It is also common for instructions to refer to documents, texts or URL's that the assistant does not have access to. Please rate conversations where that happens with 3 points or less, as they can lead to ambiguity and confusion.

Provide your final response in the following format:

Category: <one of the categories above>

Reasoning: <score out of 5>

Readability: <score out of 5>

DO NOT provide an answer to any of the instructions in the conversation! Your job is only to analyse.)P";

std::string strip_markup(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != '*' && c != '_' && c != '`') out += c;
  }
  return out;
}

// Value after the last "<key>:" that starts a line (after list/heading marks).
std::optional<std::string> last_field(std::string_view text, std::string_view key) {
  std::optional<std::string> found;
  for (auto raw : split_lines(text)) {
    const auto line = strip_markup(raw);
    auto l = trim(line);
    while (!l.empty() && (l.front() == '-' || l.front() == '#' || l.front() == '>')) l = trim(l.substr(1));
    if (l.size() <= key.size() || to_lower(l.substr(0, key.size())) != key) continue;
    auto rest = trim(l.substr(key.size()));
    if (rest.empty() || rest.front() != ':') continue;
    found = std::string(trim(rest.substr(1)));
  }
  return found;
}

// "4", "4/5", "4 out of 5", "[4]".
std::optional<long long> parse_score(std::string_view v) {
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = trim(v.substr(1, v.size() - 2));
  if (const auto slash = v.find('/'); slash != std::string_view::npos) {
    if (trim(v.substr(slash + 1)) != "5") return std::nullopt;
    v = trim(v.substr(0, slash));
  } else if (const auto out = find_icase(v, " out of "); out != std::string_view::npos) {
    if (trim(v.substr(out + 8)) != "5") return std::nullopt;
    v = trim(v.substr(0, out));
  }
  return parse_int(v);
}

}  // namespace

std::string build_triage_prompt(const Conversation& conversation) {
  return std::string(kTriageHead) + conversation.render() + std::string(kTriageTail);
}

ScoreBundle parse_triage(std::string_view judge_output) {
  std::vector<std::string> problems;
  CategoryMatch category;
  if (const auto c = last_field(judge_output, "category"); !c || c->empty()) {
    problems.push_back("category");
  } else {
    category = match_category(*c);
  }
  const auto score = [&](std::string_view name) -> int {
    const auto raw = last_field(judge_output, name);
    if (!raw) {
      problems.push_back(std::string(name));
      return kMinScore;
    }
    const auto v = parse_score(*raw);
    if (!v) {
      problems.push_back(std::string(name) + " not an integer");
      return kMinScore;
    }
    if (*v < kMinScore || *v > kMaxScore) {
      problems.push_back(std::string(name) + " out of range");
      return kMinScore;
    }
    return static_cast<int>(*v);
  };
  const int reasoning = score("reasoning");
  const int readability = score("readability");
  if (!problems.empty()) {
    std::string detail;
    for (const auto& p : problems) detail += (detail.empty() ? "" : ", ") + p;
    fail(ErrorCode::ParseFailure, detail);
  }
  return ScoreBundle(category.category, reasoning, readability, category.recognized);
}

ScoreBundle triage(const Conversation& conversation, gateway::Gateway& gw, const std::string& judge_endpoint) {
  return parse_triage(gw.complete(judge_endpoint, build_triage_prompt(conversation)));
}

bool keep_record(const ScoreBundle& scores, std::string_view source_dataset,
                 const std::set<std::string, std::less<>>& allowlist, int threshold) {
  if (scores.reasoning() >= threshold && scores.readability() >= threshold) return true;
  return allowlist.find(source_dataset) != allowlist.end();
}

}  // namespace mtforge::sft

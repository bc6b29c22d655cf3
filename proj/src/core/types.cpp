#include "mtforge/core/types.hpp"

#include <cctype>

#include "mtforge/core/error.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge {

bool is_valid_language_code(std::string_view code) {
  if (code.empty()) return false;
  std::size_t i = 0;
  while (i < code.size() && std::isalpha(static_cast<unsigned char>(code[i]))) ++i;
  if (i == 0) return false;
  if (i == code.size()) return true;
  if (code[i] != '_' || i + 1 == code.size()) return false;
  for (++i; i < code.size(); ++i) {
    if (!std::isalnum(static_cast<unsigned char>(code[i]))) return false;
  }
  return true;
}

LanguageTag::LanguageTag(std::string code, std::string display_name)
    : code_(std::move(code)), display_name_(std::move(display_name)) {
  require(is_valid_language_code(code_), ErrorCode::InvalidArgument,
          "language code '" + code_ + "' must be letters with an optional _REGION suffix");
  require(!display_name_.empty(), ErrorCode::InvalidArgument,
          "language display name is empty for " + code_);
}

std::string_view to_string(Direction d) {
  return d == Direction::HigherBetter ? "higher_better" : "lower_better";
}

Direction parse_direction(std::string_view text) {
  const std::string t = to_lower(text);
  if (t == "higher_better" || t == "higherbetter" || t == "higher") return Direction::HigherBetter;
  if (t == "lower_better" || t == "lowerbetter" || t == "lower") return Direction::LowerBetter;
  fail(ErrorCode::InvalidArgument, "unknown metric direction '" + std::string(text) + "'");
}

Comparison compare_scores(const MetricScore& a, const MetricScore& b) {
  if (a.metric_id != b.metric_id) {
    fail(ErrorCode::MetricMismatch, "'" + a.metric_id + "' vs '" + b.metric_id + "'");
  }
  if (a.value == b.value) return Comparison::Equal;
  const bool a_larger = a.value > b.value;
  const bool a_wins = a.direction == Direction::HigherBetter ? a_larger : !a_larger;
  return a_wins ? Comparison::ABetter : Comparison::BBetter;
}

bool passes_threshold(const MetricScore& score, double threshold) {
  return score.direction == Direction::HigherBetter ? score.value >= threshold
                                                    : score.value <= threshold;
}

std::string_view to_string(Choice c) {
  switch (c) {
    case Choice::A: return "A";
    case Choice::B: return "B";
    case Choice::Tie: return "T";
  }
  return "T";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Coding: return "Coding";
    case Category::MathematicalReasoning: return "Mathematical Reasoning";
    case Category::AdviceAndBrainstorming: return "Advice and Brainstorming";
    case Category::QuestionAnswering: return "Question Answering";
    case Category::CreativeWritingAndPersona: return "Creative Writing and Persona";
    case Category::TextCorrectionOrRewriting: return "Text Correction or Rewriting";
    case Category::Summarization: return "Summarization";
    case Category::Translation: return "Translation";
    case Category::Classification: return "Classification";
    case Category::Other: return "Other";
  }
  return "Other";
}

const std::vector<Category>& all_categories() {
  static const std::vector<Category> kAll = {
      Category::Coding,           Category::MathematicalReasoning,
      Category::AdviceAndBrainstorming, Category::QuestionAnswering,
      Category::CreativeWritingAndPersona, Category::TextCorrectionOrRewriting,
      Category::Summarization,    Category::Translation,
      Category::Classification,   Category::Other,
  };
  return kAll;
}

namespace {

// Lower-cased, punctuation-free, single-spaced form used for label matching.
std::string normalize_label(std::string_view label) {
  std::string out;
  bool pending_space = false;
  for (char ch : label) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

}  // namespace

CategoryMatch match_category(std::string_view label) {
  const std::string needle = normalize_label(label);
  for (Category c : all_categories()) {
    if (normalize_label(to_string(c)) == needle) return {c, true};
  }
  return {Category::Other, false};
}

ScoreBundle::ScoreBundle(Category category, int reasoning, int readability, bool category_recognized)
    : category_(category),
      reasoning_(reasoning),
      readability_(readability),
      category_recognized_(category_recognized) {
  require(reasoning >= kMinScore && reasoning <= kMaxScore, ErrorCode::InvalidArgument,
          "reasoning score " + std::to_string(reasoning) + " outside [1,5]");
  require(readability >= kMinScore && readability <= kMaxScore, ErrorCode::InvalidArgument,
          "readability score " + std::to_string(readability) + " outside [1,5]");
}

std::string_view to_string(Role r) { return r == Role::User ? "user" : "assistant"; }

Role parse_role(std::string_view text) {
  const std::string t = to_lower(text);
  if (t == "user") return Role::User;
  if (t == "assistant") return Role::Assistant;
  fail(ErrorCode::InvalidArgument, "unknown role '" + std::string(text) + "'");
}

Conversation::Conversation(std::vector<Turn> turns, std::string source_dataset)
    : turns_(std::move(turns)), source_dataset_(std::move(source_dataset)) {
  require(!turns_.empty(), ErrorCode::InvalidArgument, "conversation has no turns");
  for (std::size_t i = 0; i < turns_.size(); ++i) {
    const Role expected = i % 2 == 0 ? Role::User : Role::Assistant;
    require(turns_[i].role == expected, ErrorCode::InvalidArgument,
            "turn " + std::to_string(i) + " should be " + std::string(to_string(expected)));
  }
}

const std::string& Conversation::last_user_text() const {
  for (auto it = turns_.rbegin(); it != turns_.rend(); ++it) {
    if (it->role == Role::User) return it->text;
  }
  return turns_.front().text;  // unreachable: turn 0 is always a user turn
}

std::string Conversation::render() const {
  std::string out;
  for (const Turn& t : turns_) {
    if (!out.empty()) out += "\n\n";
    out += t.role == Role::User ? "User: " : "Assistant: ";
    out += t.text;
  }
  return out;
}

}  // namespace mtforge

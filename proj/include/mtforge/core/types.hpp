#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtforge {

// A language or dialect, e.g. {"pt_BR", "Portuguese (Brazil)"}.
class LanguageTag {
 public:
  LanguageTag(std::string code, std::string display_name);

  const std::string& code() const noexcept { return code_; }
  const std::string& display_name() const noexcept { return display_name_; }

  friend bool operator==(const LanguageTag&, const LanguageTag&) = default;

 private:
  std::string code_;
  std::string display_name_;
};

bool is_valid_language_code(std::string_view code);

enum class Direction { HigherBetter, LowerBetter };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

struct MetricScore {
  std::string metric_id;
  double value = 0.0;
  Direction direction = Direction::HigherBetter;

  friend bool operator==(const MetricScore&, const MetricScore&) = default;
};

enum class Comparison { ABetter, BBetter, Equal };

// Direction-aware comparison with exact equality. Throws MetricMismatch when
// the two scores come from different metrics.
Comparison compare_scores(const MetricScore& a, const MetricScore& b);

// True when `score` is at least as good as `threshold` under its direction.
bool passes_threshold(const MetricScore& score, double threshold);

enum class Choice { A, B, Tie };

std::string_view to_string(Choice c);

struct JudgeVerdict {
  Choice choice = Choice::Tie;
  std::string rationale;

  friend bool operator==(const JudgeVerdict&, const JudgeVerdict&) = default;
};

// The closed category list of the SFT triage prompt. Order matches the prompt.
enum class Category {
  Coding,
  MathematicalReasoning,
  AdviceAndBrainstorming,
  QuestionAnswering,
  CreativeWritingAndPersona,
  TextCorrectionOrRewriting,
  Summarization,
  Translation,
  Classification,
  Other,
};

inline constexpr int kCategoryCount = 10;

std::string_view to_string(Category c);
const std::vector<Category>& all_categories();

struct CategoryMatch {
  Category category = Category::Other;
  bool recognized = false;
};

// Maps a free-text label onto the closed list. Unknown labels come back as
// Other with recognized = false.
CategoryMatch match_category(std::string_view label);

class ScoreBundle {
 public:
  // Throws InvalidArgument if either score is outside [1, 5].
  ScoreBundle(Category category, int reasoning, int readability, bool category_recognized = true);

  Category category() const noexcept { return category_; }
  int reasoning() const noexcept { return reasoning_; }
  int readability() const noexcept { return readability_; }
  // False when the judge produced a label outside the list and it was mapped to Other.
  bool category_recognized() const noexcept { return category_recognized_; }

  friend bool operator==(const ScoreBundle&, const ScoreBundle&) = default;

 private:
  Category category_;
  int reasoning_;
  int readability_;
  bool category_recognized_;
};

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;

enum class Role { User, Assistant };

std::string_view to_string(Role r);
Role parse_role(std::string_view text);

struct Turn {
  Role role = Role::User;
  std::string text;

  friend bool operator==(const Turn&, const Turn&) = default;
};

class Conversation {
 public:
  // Validates: non-empty, first turn is the user, roles alternate.
  Conversation(std::vector<Turn> turns, std::string source_dataset);

  const std::vector<Turn>& turns() const noexcept { return turns_; }
  const std::string& source_dataset() const noexcept { return source_dataset_; }

  // Text of the last user turn; the instruction judges see.
  const std::string& last_user_text() const;

  // "User: ...\n\nAssistant: ..." rendering used inside judge prompts.
  std::string render() const;

  friend bool operator==(const Conversation&, const Conversation&) = default;

 private:
  std::vector<Turn> turns_;
  std::string source_dataset_;
};

}  // namespace mtforge

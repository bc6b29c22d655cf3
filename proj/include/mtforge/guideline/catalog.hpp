#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace mtforge::guideline {

struct GuidelineSpec {
  std::string id;  // e.g. DATE_001
  std::string category;
  std::string name;
  std::string description;
  bool requires_example = false;
  std::string verification_regex;
  std::string example_input;
  std::string example_output;

  // Set by compile(); shared so copies stay cheap.
  std::shared_ptr<const std::regex> compiled;

  // Compiles the regex and checks example_output matches while example_input
  // does not. Throws RegexCompileError or CatalogInvalid.
  void compile();
  // Search semantics: true if the pattern occurs anywhere in text.
  bool matches(std::string_view text) const;
};

// Rejects backreferences, then compiles with the ECMAScript grammar.
std::regex compile_verification_regex(const std::string& pattern);

// Parses one "KEY: value" spec file. Keys: ID, CATEGORY, NAME, DESCRIPTION,
// REQUIRES_EXAMPLE, VERIFICATION, EXAMPLE_INPUT, EXAMPLE_OUTPUT. Lines
// starting with '#' are comments. The result is compiled and validated.
GuidelineSpec parse_guideline_spec(std::string_view text, const std::string& origin = "<memory>");

// Immutable after loading; safe to share across threads.
class Catalog {
 public:
  static Catalog load_directory(const std::filesystem::path& dir);

  void add(GuidelineSpec spec);

  bool empty() const { return specs_.empty(); }
  std::size_t size() const { return specs_.size(); }
  const std::vector<GuidelineSpec>& specs() const { return specs_; }
  const GuidelineSpec* find(std::string_view id) const;
  const GuidelineSpec& at(std::string_view id) const;  // throws InvalidArgument

  // Sorted by name.
  std::vector<std::string> categories() const;
  // Catalog order (which is id order for directory loads).
  std::vector<const GuidelineSpec*> in_category(std::string_view category) const;

 private:
  std::vector<GuidelineSpec> specs_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

struct TopicPair {
  std::string topic;
  std::string subtopic;

  std::string label() const { return topic + " - " + subtopic; }
  bool operator==(const TopicPair&) const = default;
};

// Tab-separated "topic<TAB>subtopic" lines; '#' comments and blank lines skipped.
std::vector<TopicPair> load_topics(const std::filesystem::path& path);
std::vector<TopicPair> parse_topics(std::string_view text);

}  // namespace mtforge::guideline

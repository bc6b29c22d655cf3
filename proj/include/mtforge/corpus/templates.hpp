#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mtforge/corpus/parallel_pair.hpp"

namespace mtforge::corpus {

// Jinja-style slots a translation template must carry: {{ source }},
// {{ target }}, {{ lp0 }} and {{ lp1 }}. Language slots render display names.
class TemplateRegistry {
 public:
  // The eight stock templates, ids "translate_source_from" .. "text_above_into".
  static TemplateRegistry builtin();

  // Throws PlaceholderMissing when a slot is absent, InvalidArgument on an
  // unknown or unterminated slot.
  void add(std::string id, std::string text);

  // One template per regular file; the file stem is the template id. A single
  // trailing newline is dropped.
  void load_directory(const std::filesystem::path& dir);

  bool contains(std::string_view id) const;
  std::vector<std::string> ids() const;
  const std::string& text(std::string_view id) const;

  // Throws UnknownTemplate for ids not in the registry.
  std::string render(const ParallelPair& pair, std::string_view id) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

// Single-pass substitution; substituted values are never re-expanded.
std::string render_template(std::string_view text, const ParallelPair& pair);

}  // namespace mtforge::corpus

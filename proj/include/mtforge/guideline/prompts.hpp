#pragma once

#include <string>
#include <string_view>

#include "mtforge/guideline/bundle.hpp"

namespace mtforge::guideline {

// "1) [Category] description" per guideline; guidelines that require an
// example get ", e.g., <input> to <output>" appended.
std::string format_guidelines(const GuidelineBundle& bundle);

std::string build_generation_prompt(const GuidelineBundle& bundle);

struct GenerationOutput {
  std::string source_text;
  std::string guidelines_text;
};

// Throws MarkerMissing with detail SOURCE, GUIDELINES, END or ORDER.
GenerationOutput parse_generation_output(std::string_view raw);

// Inverse of parse_generation_output up to trimming.
std::string render_generation_output(const GenerationOutput& output);

std::string build_verification_prompt(const GuidelineBundle& bundle, std::string_view guidelines_text,
                                       std::string_view source_text);

// Value of the last "Guidelines Check:" line; 0 or 1, brackets allowed.
// Throws ParseFailure otherwise.
int parse_guidelines_check(std::string_view judge_output);

// Translation and transformation steps. Neither instruction comes from a
// published template; both are deliberately minimal.
std::string build_translation_prompt(std::string_view source_text, std::string_view source_language,
                                     std::string_view target_language);
std::string build_apply_prompt(std::string_view guidelines_text, std::string_view translation,
                               std::string_view target_language);

}  // namespace mtforge::guideline

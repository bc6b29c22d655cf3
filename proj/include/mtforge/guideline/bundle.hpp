#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtforge/guideline/catalog.hpp"

namespace mtforge::guideline {

enum class LengthClass { OneSentence, TwoSentences, OneParagraph };

std::string to_string(LengthClass length);  // "1 sentence", "2 sentences", "1 paragraph"
LengthClass parse_length_class(std::string_view text);

inline constexpr std::size_t kMaxBundleSize = 4;

struct GuidelineBundle {
  std::vector<GuidelineSpec> guidelines;
  LengthClass length = LengthClass::OneSentence;
  std::string topic;
  std::string subtopic;

  // 1..4 guidelines with pairwise distinct categories.
  void validate() const;
  std::string topic_label() const { return topic + " - " + subtopic; }
};

struct BundleOptions {
  // When the catalog has fewer categories than the drawn size: false redraws
  // the size uniformly in 1..categories, true throws CatalogTooSmall.
  bool strict_size = false;
};

GuidelineBundle sample_bundle(const Catalog& catalog, std::span<const TopicPair> topics,
                              std::uint64_t seed, const BundleOptions& options = {});

}  // namespace mtforge::guideline

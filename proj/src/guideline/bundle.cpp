#include "mtforge/guideline/bundle.hpp"

#include <set>

#include "mtforge/core/error.hpp"
#include "mtforge/core/rng.hpp"
#include "mtforge/core/text.hpp"

namespace mtforge::guideline {

std::string to_string(LengthClass length) {
  switch (length) {
    case LengthClass::OneSentence: return "1 sentence";
    case LengthClass::TwoSentences: return "2 sentences";
    case LengthClass::OneParagraph: return "1 paragraph";
  }
  return "?";
}

LengthClass parse_length_class(std::string_view text) {
  const auto t = to_lower(trim(text));
  if (t == "1 sentence") return LengthClass::OneSentence;
  if (t == "2 sentences") return LengthClass::TwoSentences;
  if (t == "1 paragraph") return LengthClass::OneParagraph;
  fail(ErrorCode::InvalidArgument, "unknown length class: " + std::string(text));
}

void GuidelineBundle::validate() const {
  require(!guidelines.empty() && guidelines.size() <= kMaxBundleSize, ErrorCode::InvalidArgument,
          "bundle must hold 1..4 guidelines");
  std::set<std::string> cats;
  for (const auto& g : guidelines) {
    require(cats.insert(g.category).second, ErrorCode::InvalidArgument, "repeated category " + g.category);
  }
}

GuidelineBundle sample_bundle(const Catalog& catalog, std::span<const TopicPair> topics, std::uint64_t seed,
                              const BundleOptions& options) {
  require(!catalog.empty(), ErrorCode::PreconditionViolation, "empty guideline catalog");
  require(!topics.empty(), ErrorCode::PreconditionViolation, "empty topic list");
  Rng rng(seed);
  auto cats = catalog.categories();
  std::size_t size = 1 + rng.index(kMaxBundleSize);
  if (size > cats.size()) {
    if (options.strict_size) {
      fail(ErrorCode::CatalogTooSmall, "drew " + std::to_string(size) + " guidelines but catalog has " +
                                           std::to_string(cats.size()) + " categories");
    }
    size = 1 + rng.index(cats.size());
  }
  // Partial Fisher-Yates: the first `size` slots become the chosen categories.
  for (std::size_t i = 0; i < size; ++i) {
    std::swap(cats[i], cats[i + rng.index(cats.size() - i)]);
  }
  GuidelineBundle bundle;
  for (std::size_t i = 0; i < size; ++i) {
    const auto members = catalog.in_category(cats[i]);
    bundle.guidelines.push_back(*members[rng.index(members.size())]);
  }
  bundle.length = static_cast<LengthClass>(rng.index(3));
  const auto& topic = topics[rng.index(topics.size())];
  bundle.topic = topic.topic;
  bundle.subtopic = topic.subtopic;
  return bundle;
}

}  // namespace mtforge::guideline

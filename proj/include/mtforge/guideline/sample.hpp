#pragma once

#include <optional>
#include <string>

#include "mtforge/core/json.hpp"
#include "mtforge/core/types.hpp"
#include "mtforge/guideline/bundle.hpp"

namespace mtforge::guideline {

enum class SampleState { Generated, SourceVerified, Translated, Accepted, Rejected };

std::string to_string(SampleState state);
SampleState parse_sample_state(std::string_view text);

// Moves only forward: Generated -> SourceVerified -> Translated -> Accepted,
// or to Rejected from any non-terminal state. Anything else throws
// InvalidTransition.
class VerifiableSample {
 public:
  VerifiableSample(GuidelineBundle bundle, std::string source_text, std::string guidelines_text);

  const GuidelineBundle& bundle() const { return bundle_; }
  const std::string& source_text() const { return source_text_; }
  const std::string& guidelines_text() const { return guidelines_text_; }
  const std::optional<std::string>& translation() const { return translation_; }
  const std::optional<MetricScore>& quality() const { return quality_; }
  SampleState state() const { return state_; }
  const std::string& rejection_reason() const { return rejection_reason_; }
  bool terminal() const { return state_ == SampleState::Accepted || state_ == SampleState::Rejected; }

  void mark_source_verified();
  void set_translation(std::string translation, MetricScore quality);
  void accept();
  void reject(std::string reason);

  Json to_json() const;
  // Guidelines are stored by id and resolved against the catalog.
  static VerifiableSample from_json(const Json& j, const Catalog& catalog);

 private:
  void require_state(SampleState expected, std::string_view op) const;

  GuidelineBundle bundle_;
  std::string source_text_;
  std::string guidelines_text_;
  std::optional<std::string> translation_;
  std::optional<MetricScore> quality_;
  SampleState state_ = SampleState::Generated;
  std::string rejection_reason_;
};

}  // namespace mtforge::guideline

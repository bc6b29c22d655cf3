#include "mtforge/guideline/sample.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge::guideline {

std::string to_string(SampleState state) {
  switch (state) {
    case SampleState::Generated: return "Generated";
    case SampleState::SourceVerified: return "SourceVerified";
    case SampleState::Translated: return "Translated";
    case SampleState::Accepted: return "Accepted";
    case SampleState::Rejected: return "Rejected";
  }
  return "?";
}

SampleState parse_sample_state(std::string_view text) {
  for (auto s : {SampleState::Generated, SampleState::SourceVerified, SampleState::Translated,
                 SampleState::Accepted, SampleState::Rejected}) {
    if (to_string(s) == text) return s;
  }
  fail(ErrorCode::DataError, "unknown sample state: " + std::string(text));
}

VerifiableSample::VerifiableSample(GuidelineBundle bundle, std::string source_text, std::string guidelines_text)
    : bundle_(std::move(bundle)), source_text_(std::move(source_text)), guidelines_text_(std::move(guidelines_text)) {
  bundle_.validate();
  require(!source_text_.empty(), ErrorCode::InvalidArgument, "empty source text");
}

void VerifiableSample::require_state(SampleState expected, std::string_view op) const {
  if (state_ != expected) {
    fail(ErrorCode::InvalidTransition,
         std::string(op) + " requires state " + to_string(expected) + ", sample is " + to_string(state_));
  }
}

void VerifiableSample::mark_source_verified() {
  require_state(SampleState::Generated, "mark_source_verified");
  state_ = SampleState::SourceVerified;
}

void VerifiableSample::set_translation(std::string translation, MetricScore quality) {
  require_state(SampleState::SourceVerified, "set_translation");
  require(!translation.empty(), ErrorCode::InvalidArgument, "empty translation");
  translation_ = std::move(translation);
  quality_ = std::move(quality);
  state_ = SampleState::Translated;
}

void VerifiableSample::accept() {
  require_state(SampleState::Translated, "accept");
  state_ = SampleState::Accepted;
}

void VerifiableSample::reject(std::string reason) {
  if (terminal()) fail(ErrorCode::InvalidTransition, "reject on terminal state " + to_string(state_));
  rejection_reason_ = std::move(reason);
  state_ = SampleState::Rejected;
}

Json VerifiableSample::to_json() const {
  Json ids = Json::array();
  for (const auto& g : bundle_.guidelines) ids.push_back(g.id);
  Json j{{"guideline_ids", ids},
         {"length", to_string(bundle_.length)},
         {"topic", bundle_.topic},
         {"subtopic", bundle_.subtopic},
         {"source_text", source_text_},
         {"guidelines_text", guidelines_text_},
         {"state", to_string(state_)}};
  if (translation_) j["translation"] = *translation_;
  if (quality_) j["quality"] = *quality_;
  if (state_ == SampleState::Rejected) j["rejection_reason"] = rejection_reason_;
  return j;
}

VerifiableSample VerifiableSample::from_json(const Json& j, const Catalog& catalog) {
  GuidelineBundle bundle;
  const auto& ids = field(j, "guideline_ids");
  require(ids.is_array(), ErrorCode::DataError, "guideline_ids must be an array");
  for (const auto& id : ids) {
    require(id.is_string(), ErrorCode::DataError, "guideline_ids must hold strings");
    const auto* spec = catalog.find(id.get<std::string>());
    require(spec != nullptr, ErrorCode::DataError, "unknown guideline id " + id.get<std::string>());
    bundle.guidelines.push_back(*spec);
  }
  try {
    bundle.length = parse_length_class(string_field(j, "length"));
  } catch (const Error& e) {
    fail(ErrorCode::DataError, e.detail());
  }
  bundle.topic = string_field(j, "topic");
  bundle.subtopic = string_field(j, "subtopic");
  try {
    bundle.validate();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, e.detail());
  }
  const auto source = string_field(j, "source_text");
  require(!source.empty(), ErrorCode::DataError, "empty source_text");
  VerifiableSample s(std::move(bundle), source, optional_string_field(j, "guidelines_text").value_or(""));
  s.state_ = parse_sample_state(string_field(j, "state"));
  s.translation_ = optional_string_field(j, "translation");
  if (j.contains("quality")) {
    try {
      s.quality_ = j.at("quality").get<MetricScore>();
    } catch (const Json::exception& e) {
      fail(ErrorCode::DataError, std::string("quality: ") + e.what());
    }
  }
  s.rejection_reason_ = optional_string_field(j, "rejection_reason").value_or("");
  const bool needs_translation = s.state_ == SampleState::Translated || s.state_ == SampleState::Accepted;
  require(!needs_translation || (s.translation_ && s.quality_), ErrorCode::DataError,
          "state " + to_string(s.state_) + " requires translation and quality");
  return s;
}

}  // namespace mtforge::guideline

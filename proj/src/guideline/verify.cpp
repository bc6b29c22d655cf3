#include "mtforge/guideline/verify.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/guideline/prompts.hpp"

namespace mtforge::guideline {

bool verify_source_violates(VerifiableSample& sample, gateway::Gateway& gw, const std::string& judge_endpoint) {
  if (sample.state() != SampleState::Generated) {
    fail(ErrorCode::InvalidTransition, "source verification requires state Generated");
  }
  for (const auto& g : sample.bundle().guidelines) {
    if (g.matches(sample.source_text())) {
      sample.reject("source already follows " + g.id);
      return false;
    }
  }
  const auto& shown = sample.guidelines_text().empty() ? format_guidelines(sample.bundle()) : sample.guidelines_text();
  const auto reply = gw.complete(judge_endpoint, build_verification_prompt(sample.bundle(), shown, sample.source_text()));
  if (parse_guidelines_check(reply) == 0) {
    sample.mark_source_verified();
    return true;
  }
  sample.reject("judge: source follows a guideline");
  return false;
}

SampleState verify_translation(VerifiableSample& sample, double gate) {
  if (sample.state() != SampleState::Translated) {
    fail(ErrorCode::InvalidTransition, "translation verification requires state Translated");
  }
  const auto& text = *sample.translation();
  for (const auto& g : sample.bundle().guidelines) {
    if (!g.matches(text)) {
      sample.reject("regex " + g.id);
      return sample.state();
    }
  }
  if (!passes_threshold(*sample.quality(), gate)) {
    sample.reject("quality");
    return sample.state();
  }
  sample.accept();
  return sample.state();
}

}  // namespace mtforge::guideline

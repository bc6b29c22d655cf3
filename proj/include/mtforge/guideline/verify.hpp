#pragma once

#include <string>

#include "mtforge/gateway/gateway.hpp"
#include "mtforge/guideline/sample.hpp"

namespace mtforge::guideline {

inline constexpr double kDefaultQualityGate = 0.8;

// Requires state Generated. If any guideline regex already matches the source
// the sample is rejected without a judge call. Otherwise the judge decides:
// check 0 advances to SourceVerified, check 1 rejects. ParseFailure leaves
// the sample untouched.
bool verify_source_violates(VerifiableSample& sample, gateway::Gateway& gw,
                            const std::string& judge_endpoint);

// Requires state Translated. Accepts iff every guideline regex matches the
// translation and quality passes the gate; otherwise rejects with the first
// failing reason ("regex <id>" or "quality").
SampleState verify_translation(VerifiableSample& sample, double gate = kDefaultQualityGate);

}  // namespace mtforge::guideline

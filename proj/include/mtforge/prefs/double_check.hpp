#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/gateway/gateway.hpp"
#include "mtforge/prefs/pair.hpp"

namespace mtforge::prefs {

struct DoubleCheckConfig {
  std::string metric_endpoint;  // second metric, e.g. a MetricX model
  std::string judge_endpoint;
  std::uint64_t seed = 0;       // drives the A/B presentation coin
};

struct DoubleCheckInput {
  std::string instruction;  // what the judge sees as the user request
  std::string source_text;  // what the metric scores against
  std::optional<std::string> reference;
  std::string chosen;
  std::string rejected;
};

struct DoubleCheckResult {
  bool passed = false;
  std::vector<Check> checks;  // metric first; judge only if the metric passed
  bool chosen_shown_as_a = true;
  std::optional<JudgeVerdict> verdict;  // as returned, in presentation terms
};

// True when the chosen presentation slot is A for this pair and seed.
bool chosen_presented_first(std::string_view chosen, std::string_view rejected, std::uint64_t seed);

// Passes iff the second metric strictly favours chosen (direction-aware) and
// the judge picks chosen. Tie fails. Malformed verdicts throw ParseFailure.
DoubleCheckResult double_check(const DoubleCheckInput& input, gateway::Gateway& gw, const DoubleCheckConfig& config);

}  // namespace mtforge::prefs

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtforge/gateway/gateway.hpp"
#include "mtforge/prefs/double_check.hpp"
#include "mtforge/prefs/mbr.hpp"
#include "mtforge/prefs/pair.hpp"

namespace mtforge::prefs {

struct MbrPrompt {
  std::string id;
  Conversation prompt;      // its last user turn is the judge instruction
  std::string source_text;  // text being translated, for the metrics
  std::optional<std::string> reference;
  std::vector<std::string> candidates;  // sampled when empty
};

MbrPrompt mbr_prompt_from_json(const Json& j);

inline constexpr int kDefaultMbrSamples = 24;
inline constexpr double kDefaultMbrTemperature = 1.0;

struct MbrPairOptions {
  std::string generator_endpoint;  // used only for prompts without candidates
  std::string utility_endpoint;
  DoubleCheckConfig double_check;
  int num_samples = kDefaultMbrSamples;
  double temperature = kDefaultMbrTemperature;
  std::uint64_t seed = 0;
  std::size_t concurrency = 4;
};

struct MbrPairCounts {
  std::size_t prompts = 0;
  std::size_t mbr_pairs = 0;
  std::size_t identical = 0;       // best and worst had the same text
  std::size_t metric_failed = 0;
  std::size_t judge_failed = 0;
  std::size_t emitted = 0;

  Json to_json() const;
};

struct MbrPairResult {
  std::vector<PreferencePair> pairs;  // input order
  MbrPairCounts counts;
};

MbrPairResult build_mbr_pairs(const std::vector<MbrPrompt>& prompts, gateway::Gateway& gw,
                              const MbrPairOptions& options);

// Best and worst candidate under a reward model (argmax/argmin, lowest index
// on ties). Returns nothing when they share the same text.
std::optional<PreferencePair> reward_pair(const std::string& id, const Conversation& prompt,
                                          const std::vector<std::string>& candidates, gateway::Gateway& gw,
                                          const std::string& reward_endpoint, Provenance provenance);

}  // namespace mtforge::prefs

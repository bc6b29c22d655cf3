#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mtforge/corpus/parallel_pair.hpp"
#include "mtforge/gateway/gateway.hpp"

namespace mtforge::corpus {

struct GateOptions {
  std::string endpoint_id;  // reference-free metric, e.g. a QE model
  double threshold = 0.0;   // no default: callers must choose one
  bool lenient = false;     // skip pairs with malformed responses instead of failing
  std::size_t concurrency = 4;
};

struct GateSkip {
  std::size_t index;  // position in the input span
  std::string reason;
};

struct GateResult {
  std::vector<ParallelPair> kept;   // input order
  std::vector<MetricScore> scores;  // score of each kept pair
  std::vector<GateSkip> skipped;
  std::size_t scored = 0;
};

// Keeps exactly the pairs whose reference-free score passes `threshold` under
// the metric's declared direction. EndpointUnavailable always propagates.
GateResult quality_gate(std::span<const ParallelPair> pairs, gateway::Gateway& gw,
                        const GateOptions& options);

}  // namespace mtforge::corpus

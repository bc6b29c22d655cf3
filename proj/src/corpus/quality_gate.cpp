#include "mtforge/corpus/quality_gate.hpp"

#include <optional>

#include "mtforge/core/error.hpp"
#include "mtforge/core/parallel.hpp"

namespace mtforge::corpus {

GateResult quality_gate(std::span<const ParallelPair> pairs, gateway::Gateway& gw, const GateOptions& options) {
  struct Slot {
    std::optional<MetricScore> score;
    std::optional<std::string> skip_reason;
  };
  std::vector<Slot> slots(pairs.size());

  parallel_for(pairs.size(), options.concurrency, [&](std::size_t i) {
    gateway::QualityRequest req;
    req.source_text = pairs[i].source;
    req.translation_text = pairs[i].target;
    try {
      slots[i].score = gw.score_quality(options.endpoint_id, req);
    } catch (const Error& e) {
      if (options.lenient && e.code() == ErrorCode::MalformedResponse) {
        slots[i].skip_reason = e.what();
        return;
      }
      throw;
    }
  });

  GateResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (slots[i].skip_reason) {
      result.skipped.push_back({i, *slots[i].skip_reason});
      continue;
    }
    ++result.scored;
    if (passes_threshold(*slots[i].score, options.threshold)) {
      result.kept.push_back(pairs[i]);
      result.scores.push_back(*slots[i].score);
    }
  }
  return result;
}

}  // namespace mtforge::corpus

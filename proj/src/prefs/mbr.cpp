#include "mtforge/prefs/mbr.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/parallel.hpp"

namespace mtforge::prefs {

MbrResult mbr(std::vector<std::string> candidates, const Utility& utility, std::size_t concurrency) {
  require(!candidates.empty(), ErrorCode::PreconditionViolation, "mbr needs at least one candidate");
  const std::size_t n = candidates.size();
  MbrResult r;
  r.utilities.assign(n, 0.0);
  if (n > 1) {
    parallel_for(n, concurrency, [&](std::size_t i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        try {
          sum += utility(candidates[i], candidates[j]);
        } catch (const std::exception& e) {
          fail(ErrorCode::UtilityFailure,
               "utility(" + std::to_string(i) + ", " + std::to_string(j) + ") failed: " + e.what());
        }
      }
      r.utilities[i] = sum / static_cast<double>(n - 1);
    });
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (r.utilities[i] > r.utilities[r.best_index]) r.best_index = i;
    if (r.utilities[i] < r.utilities[r.worst_index]) r.worst_index = i;
  }
  r.candidates = std::move(candidates);
  return r;
}

Utility metric_utility(gateway::Gateway& gw, std::string endpoint_id, std::string source_text) {
  return [&gw, endpoint_id = std::move(endpoint_id), source_text = std::move(source_text)](const std::string& hyp,
                                                                                            const std::string& ref) {
    const auto s = gw.score_quality(endpoint_id, {source_text, hyp, ref, ""});
    return s.direction == Direction::LowerBetter ? -s.value : s.value;
  };
}

}  // namespace mtforge::prefs

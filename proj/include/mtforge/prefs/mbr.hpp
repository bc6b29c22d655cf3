#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/gateway/gateway.hpp"

namespace mtforge::prefs {

// utility(hypothesis, pseudo_reference); higher is better.
using Utility = std::function<double(const std::string& hyp, const std::string& ref)>;

struct MbrResult {
  std::vector<std::string> candidates;
  std::vector<double> utilities;
  std::size_t best_index = 0;
  std::size_t worst_index = 0;
};

// utilities[i] is the mean of utility(c_i, c_j) over j != i, summed in
// ascending j. One candidate gets utility 0. Ties resolve to the lowest
// index for both best and worst. A throwing utility aborts with
// UtilityFailure naming the (i, j) pair. Rows are computed in parallel.
MbrResult mbr(std::vector<std::string> candidates, const Utility& utility, std::size_t concurrency = 1);

// Reference-based metric endpoint as an MBR utility; LowerBetter values are
// negated so higher is always better.
Utility metric_utility(gateway::Gateway& gw, std::string endpoint_id, std::string source_text);

}  // namespace mtforge::prefs

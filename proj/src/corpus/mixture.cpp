#include "mtforge/corpus/mixture.hpp"

#include <cmath>
#include <string>

#include "mtforge/core/error.hpp"

namespace mtforge::corpus {

namespace {
constexpr const char* kBucketNames[kBucketCount] = {"monolingual", "parallel", "instruction"};
}

void MixtureSpec::validate() const {
  double sum = 0.0;
  for (double w : weights()) {
    require(w >= 0.0 && std::isfinite(w), ErrorCode::InvalidArgument, "mixture weights must be finite and >= 0");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= 1e-9, ErrorCode::InvalidArgument,
          "mixture weights sum to " + std::to_string(sum) + ", expected 1");
}

BucketTokens plan_mixture(const MixtureSpec& spec, const BucketTokens& available, std::int64_t total_tokens) {
  spec.validate();
  require(total_tokens > 0, ErrorCode::InvalidArgument, "total_tokens must be > 0");
  const auto weights = spec.weights();
  std::array<std::int64_t, kBucketCount> budget{};
  std::int64_t assigned = 0;
  std::size_t largest = 0;
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
    const double exact = weights[b] * static_cast<double>(total_tokens);
    budget[b] = static_cast<std::int64_t>(std::floor(exact + 1e-9 * std::max(1.0, exact)));
    assigned += budget[b];
    if (weights[b] > weights[largest]) largest = b;
  }
  budget[largest] += total_tokens - assigned;

  const auto avail = available.values();
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    if (budget[b] > avail[b]) {
      fail(ErrorCode::InfeasibleMixture, std::string(kBucketNames[b]) + " needs " + std::to_string(budget[b]) +
                                             " tokens, " + std::to_string(avail[b]) + " available");
    }
  }
  return {budget[0], budget[1], budget[2]};
}

std::int64_t estimate_tokens(std::string_view text, double tokens_per_word) {
  std::int64_t words = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return static_cast<std::int64_t>(std::ceil(static_cast<double>(words) * tokens_per_word));
}

}  // namespace mtforge::corpus

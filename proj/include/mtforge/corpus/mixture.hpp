#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace mtforge::corpus {

inline constexpr std::size_t kBucketCount = 3;

// Token shares of the three continued-pretraining buckets.
struct MixtureSpec {
  double monolingual = 0.66;
  double parallel = 0.33;
  double instruction = 0.01;

  // Weights must be >= 0 and sum to 1 within 1e-9.
  void validate() const;
  std::array<double, kBucketCount> weights() const { return {monolingual, parallel, instruction}; }
};

struct BucketTokens {
  std::int64_t monolingual = 0;
  std::int64_t parallel = 0;
  std::int64_t instruction = 0;

  std::array<std::int64_t, kBucketCount> values() const { return {monolingual, parallel, instruction}; }
  friend bool operator==(const BucketTokens&, const BucketTokens&) = default;
};

// Floors each weighted share and hands the remainder to the largest-weight
// bucket (first listed on ties), so budgets always sum to total_tokens.
// Throws InfeasibleMixture if a budget exceeds what is available.
BucketTokens plan_mixture(const MixtureSpec& spec, const BucketTokens& available, std::int64_t total_tokens);

// Whitespace word count times a tokens-per-word ratio, rounded up.
std::int64_t estimate_tokens(std::string_view text, double tokens_per_word);

}  // namespace mtforge::corpus

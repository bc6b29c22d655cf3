#include "mtforge/sft/rebalance.hpp"

#include <algorithm>
#include <cmath>

#include "mtforge/core/error.hpp"
#include "mtforge/core/rng.hpp"

namespace mtforge::sft {

std::vector<std::size_t> rebalance_translation_ratio(std::span<const SftRecord> records, double target_ratio,
                                                     std::uint64_t seed) {
  require(target_ratio >= 0.0 && target_ratio <= 1.0, ErrorCode::InvalidArgument, "target ratio must be in [0, 1]");
  std::vector<std::size_t> mt, other;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const bool is_mt = records[i].scores && records[i].scores->category() == Category::Translation;
    (is_mt ? mt : other).push_back(i);
  }
  const double t = static_cast<double>(mt.size());
  const double o = static_cast<double>(other.size());
  auto* shrink = &mt;
  std::size_t keep = mt.size();
  if (target_ratio == 1.0) {
    shrink = &other;
    keep = 0;
  } else if (t * (1.0 - target_ratio) > target_ratio * o) {
    keep = static_cast<std::size_t>(std::floor(target_ratio * o / (1.0 - target_ratio) + 1e-9));
  } else if (target_ratio > 0.0) {
    shrink = &other;
    keep = static_cast<std::size_t>(std::floor(t * (1.0 - target_ratio) / target_ratio + 1e-9));
  }
  keep = std::min(keep, shrink->size());
  Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) std::swap((*shrink)[i], (*shrink)[i + rng.index(shrink->size() - i)]);
  shrink->resize(keep);
  std::vector<std::size_t> out = mt;
  out.insert(out.end(), other.begin(), other.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mtforge::sft

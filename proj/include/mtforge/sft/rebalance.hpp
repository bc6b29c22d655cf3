#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtforge/sft/record.hpp"

namespace mtforge::sft {

// Downsamples whichever side is over-represented so that records triaged as
// Translation make up `target_ratio` of the result (floor on the downsampled
// side). Returns kept indices in input order; the drop choice is seeded.
// Records without scores count as non-translation.
std::vector<std::size_t> rebalance_translation_ratio(std::span<const SftRecord> records, double target_ratio,
                                                     std::uint64_t seed);

}  // namespace mtforge::sft

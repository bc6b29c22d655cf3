#pragma once

#include <cstdint>
#include <random>

namespace mtforge {

// splitmix64 finalizer; derives independent child seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Seeded generator whose draws are identical on every standard library.
// std::uniform_int_distribution is implementation-defined, so bounded draws
// are done here by rejection sampling on the raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mtforge

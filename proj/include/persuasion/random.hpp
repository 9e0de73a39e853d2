#pragma once

#include <cstdint>
#include <random>

namespace persuasion {

/// Seeded 64-bit Mersenne Twister with a portable uniform draw.
///
/// std::uniform_real_distribution is implementation defined, so uniform()
/// builds the double from the top 53 bits of one engine output instead.
/// Sequences are therefore identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0 (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser, used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace persuasion

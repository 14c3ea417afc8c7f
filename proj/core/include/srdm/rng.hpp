#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace srdm {

/// Seeded random stream with platform-independent draws.
///
/// std::mt19937_64 provides the raw bits; all distributions are implemented
/// here (rejection sampling, fixed-form float mapping, Box-Muller) so that a
/// given seed produces the same sequence on every compiler and platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t u64() { return gen_(); }

  /// Uniform integer in [lo, hi], both inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal();

  /// Derive a child seed from a stream tag (FNV-1a fold over the tag).
  static uint64_t derive_seed(uint64_t seed, std::string_view tag);

  /// Independent stream for a named substream.
  Rng split(std::string_view tag) const { return Rng(derive_seed(seed_, tag)); }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace srdm

#pragma once

// Counter-based random streams. Every draw is a pure function of (key,
// counter), so an object's randomness depends only on how its key was derived
// and never on what other objects drew before it.

#include <cstdint>
#include <span>

#include "primforge/math.hpp"

namespace pf {

// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr uint64_t hash64(uint64_t a, uint64_t b) {
  return mix64(mix64(a + 0x9E3779B97F4A7C15ull) ^ (b * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
}

constexpr uint64_t hash64(uint64_t a, uint64_t b, uint64_t c) { return hash64(hash64(a, b), c); }

// 64-bit FNV-1a over bytes, used for config digests.
uint64_t fnv1a64(std::span<const unsigned char> bytes);

class Rng {
 public:
  explicit constexpr Rng(uint64_t seed) : key_(mix64(seed ^ 0x6A09E667F3BCC909ull)) {}

  constexpr uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), unbiased.
  uint64_t uniform_int(uint64_t n);

  // Index drawn proportionally to non-negative weights (need not be
  // normalized). Weights must have a positive sum.
  size_t categorical(std::span<const double> weights);

  bool bernoulli(double p) { return uniform() < p; }

  Vec3 unit_vector();
  Quat uniform_rotation();

  // Independent child stream; children with distinct tags never share draws.
  Rng fork(uint64_t tag) const { return Rng(hash64(key_, tag)); }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace pf

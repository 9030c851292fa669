#pragma once

#include <cstdint>
#include <numbers>

namespace resofact {

// Counter-based deterministic generator (SplitMix64). Output i is a pure
// function of (base seed, i), so the same seed yields the same sequence on
// every platform, and independent streams for parallel trials are derived by
// hashing (seed, stream index) instead of sharing mutable state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = base_ + (++calls_) * kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform phase on (0, 2*pi], matching a draw of a random phasor angle.
  double next_phase() {
    return (1.0 - next_unit()) * (2.0 * std::numbers::pi);
  }

  // Uniform integer in [0, bound) without modulo bias (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Child generator for substream `index`, independent of how many values
  // this generator has produced. Derivation hashes (base seed, index).
  Rng stream(std::uint64_t index) const {
    std::uint64_t z = (base_ ^ 0x6C62272E07BB0142ULL) + (index + 1) * kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t base() const { return base_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  std::uint64_t base_;
  std::uint64_t calls_ = 0;
};

}  // namespace resofact

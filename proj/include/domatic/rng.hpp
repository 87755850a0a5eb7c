#pragma once

#include <cstdint>

namespace domatic {

// SplitMix64. Chosen over std::mt19937_64 because the standard does not pin
// down uniform_int_distribution, and witnesses must replay bit-identically
// across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound) by rejection, bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v < threshold);
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace domatic

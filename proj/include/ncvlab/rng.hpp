#pragma once

#include <cstdint>

namespace ncvlab {

// Counter-mode randomness. Every draw in the library is a pure function of
// (seed, stream, counter), so values do not depend on materialization order,
// replays are bit-identical, and independent streams can run in parallel
// without shared state. The mixer is the splitmix64 finalizer.

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a = 0,
                                   std::uint64_t b = 0) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (a + kGolden));
  h = mix64(h ^ (b + kGolden));
  return h;
}

constexpr std::uint64_t hash_at(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + counter * kGolden);
}

// 53 random bits -> [0, 1). The division by 2^53 is exact in IEEE double.
constexpr double unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream identifiers; each module keys its draws on a distinct stream so the
// same user seed never aliases across purposes.
namespace stream {
inline constexpr std::uint64_t kPacking = 1;
inline constexpr std::uint64_t kTheta = 2;
inline constexpr std::uint64_t kOracle = 3;
inline constexpr std::uint64_t kOptimizer = 4;
inline constexpr std::uint64_t kFallback = 5;
inline constexpr std::uint64_t kTrial = 6;
}  // namespace stream

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0)
      : key_(derive_key(seed, a, b)) {}

  std::uint64_t next_u64() { return hash_at(key_, counter_++); }

  double next_unit() { return unit_double(next_u64()); }

  // Unbiased draw in [0, n) by rejection. n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v >= threshold) return v % n;
    }
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ncvlab

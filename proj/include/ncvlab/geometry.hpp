#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ncvlab {

inline constexpr std::uint32_t kDefaultDimensionCap = 20;

std::uint64_t corner_count(std::uint32_t d);

// One corner z of {0,1}^d, identified by its little-endian base-2 rank:
// bit i of the rank is digit i of z.
struct CornerIndex {
  std::uint32_t d = 0;
  std::uint64_t rank = 0;

  int bit(std::uint32_t i) const { return static_cast<int>((rank >> i) & 1u); }
  std::vector<std::uint8_t> bits() const;

  bool operator==(const CornerIndex&) const = default;
};

std::vector<CornerIndex> enumerate_corners(std::uint32_t d,
                                           std::uint32_t cap = kDefaultDimensionCap);

// Sign vector alpha in {-1,+1}^(2^d), indexed by corner rank.
struct AlphaVector {
  std::vector<std::int8_t> signs;

  int sign(std::uint64_t rank) const { return signs[rank]; }
  std::size_t size() const { return signs.size(); }

  bool operator==(const AlphaVector&) const = default;
};

// Validates that every entry is -1 or +1.
AlphaVector make_alpha(const std::vector<int>& entries);

int hamming(const AlphaVector& a, const AlphaVector& b);

struct PackingSet {
  std::uint32_t d = 0;
  int min_distance = 0;  // achieved minimum pairwise Hamming distance
  std::vector<AlphaVector> members;
};

// Required pairwise Hamming distance, ceil(2^d / 4).
int packing_distance_floor(std::uint32_t d);

// ceil((2/sqrt(e))^(2^d / 2)); throws ConstructionError when the default is
// too large to build (pass an explicit target_size instead).
std::size_t default_packing_target(std::uint32_t d);

// Wraps explicit members, computing the achieved min distance.
PackingSet make_packing(std::uint32_t d, std::vector<AlphaVector> members);

// All 2^(2^d) sign vectors; pairwise distance >= 1 by distinctness. d <= 2.
PackingSet full_packing(std::uint32_t d);

// Randomized greedy: sample uniform sign vectors, keep those at distance
// >= ceil(2^d/4) from every kept member. Deterministic in (d, seed,
// target_size). Throws ConstructionError when a slot exhausts its retries.
PackingSet build_packing(std::uint32_t d, std::uint64_t seed,
                         std::optional<std::size_t> target_size = std::nullopt,
                         int retry_budget = 10000,
                         std::uint32_t cap = kDefaultDimensionCap);

struct PackingCheck {
  bool ok = true;
  std::string reason;                      // empty when ok
  std::int64_t first = -1, second = -1;    // offending pair, when any
};

PackingCheck verify_packing(const PackingSet& p);

std::string packing_to_json(const PackingSet& p);
PackingSet packing_from_json(const std::string& text);

}  // namespace ncvlab

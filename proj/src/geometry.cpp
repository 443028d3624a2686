#include "ncvlab/geometry.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "ncvlab/errors.hpp"
#include "ncvlab/rng.hpp"

namespace ncvlab {

namespace {

void check_dimension(std::uint32_t d, std::uint32_t cap) {
  if (d < 1 || d > cap) {
    throw DimensionError("dimension d=" + std::to_string(d) +
                         " outside [1, " + std::to_string(cap) + "]");
  }
}

}  // namespace

std::uint64_t corner_count(std::uint32_t d) { return std::uint64_t{1} << d; }

std::vector<std::uint8_t> CornerIndex::bits() const {
  std::vector<std::uint8_t> out(d);
  for (std::uint32_t i = 0; i < d; ++i) out[i] = static_cast<std::uint8_t>(bit(i));
  return out;
}

std::vector<CornerIndex> enumerate_corners(std::uint32_t d, std::uint32_t cap) {
  check_dimension(d, cap);
  const std::uint64_t n = corner_count(d);
  std::vector<CornerIndex> corners;
  corners.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) corners.push_back(CornerIndex{d, r});
  return corners;
}

AlphaVector make_alpha(const std::vector<int>& entries) {
  AlphaVector a;
  a.signs.reserve(entries.size());
  for (int e : entries) {
    if (e != 1 && e != -1) {
      throw DomainError("alpha entries must be -1 or +1, got " + std::to_string(e));
    }
    a.signs.push_back(static_cast<std::int8_t>(e));
  }
  return a;
}

int hamming(const AlphaVector& a, const AlphaVector& b) {
  if (a.size() != b.size()) {
    throw LengthMismatchError("hamming: lengths " + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()));
  }
  int dist = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dist += a.signs[i] != b.signs[i];
  }
  return dist;
}

int packing_distance_floor(std::uint32_t d) {
  const std::uint64_t n = corner_count(d);
  return static_cast<int>((n + 3) / 4);
}

std::size_t default_packing_target(std::uint32_t d) {
  // Work in log space; (2/sqrt(e))^(2^d/2) overflows quickly.
  constexpr double kLogBase = 0.19314718055994531;  // ln 2 - 1/2
  constexpr std::size_t kMaxDefaultTarget = 65536;
  const double log_target = std::ldexp(1.0, static_cast<int>(d) - 1) * kLogBase;
  if (log_target > std::log(static_cast<double>(kMaxDefaultTarget))) {
    throw ConstructionError(
        "default packing target for d=" + std::to_string(d) +
            " is too large to construct; pass an explicit target_size",
        0);
  }
  return static_cast<std::size_t>(std::ceil(std::exp(log_target)));
}

namespace {

int achieved_min_distance(std::uint32_t d, const std::vector<AlphaVector>& members) {
  if (members.size() < 2) return static_cast<int>(corner_count(d));
  int best = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      best = std::min(best, hamming(members[i], members[j]));
    }
  }
  return best;
}

}  // namespace

PackingSet make_packing(std::uint32_t d, std::vector<AlphaVector> members) {
  check_dimension(d, kDefaultDimensionCap);
  const std::uint64_t n = corner_count(d);
  for (const auto& m : members) {
    if (m.size() != n) {
      throw LengthMismatchError("packing member length " + std::to_string(m.size()) +
                                " != 2^d = " + std::to_string(n));
    }
  }
  PackingSet p;
  p.d = d;
  p.members = std::move(members);
  p.min_distance = achieved_min_distance(d, p.members);
  return p;
}

PackingSet full_packing(std::uint32_t d) {
  if (d > 2) throw DimensionError("full_packing supports d <= 2");
  const std::uint64_t n = corner_count(d);
  std::vector<AlphaVector> members;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    AlphaVector a;
    a.signs.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      a.signs[i] = ((m >> i) & 1u) ? std::int8_t{1} : std::int8_t{-1};
    }
    members.push_back(std::move(a));
  }
  return make_packing(d, std::move(members));
}

PackingSet build_packing(std::uint32_t d, std::uint64_t seed,
                         std::optional<std::size_t> target_size, int retry_budget,
                         std::uint32_t cap) {
  check_dimension(d, cap);
  const std::uint64_t n = corner_count(d);
  const std::size_t target = target_size ? *target_size : default_packing_target(d);
  const int floor = packing_distance_floor(d);

  CounterRng rng(seed, stream::kPacking, d);
  std::vector<AlphaVector> kept;
  kept.reserve(target);

  auto draw_candidate = [&]() {
    AlphaVector a;
    a.signs.resize(n);
    std::uint64_t word = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = rng.next_u64();
      a.signs[i] = ((word >> (i % 64)) & 1u) ? std::int8_t{1} : std::int8_t{-1};
    }
    return a;
  };

  while (kept.size() < target) {
    bool placed = false;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
      AlphaVector cand = draw_candidate();
      bool far_enough = true;
      for (const auto& m : kept) {
        if (hamming(cand, m) < floor) {
          far_enough = false;
          break;
        }
      }
      if (far_enough) {
        kept.push_back(std::move(cand));
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw ConstructionError("build_packing: retry budget exhausted at size " +
                                  std::to_string(kept.size()) + " of target " +
                                  std::to_string(target),
                              kept.size());
    }
  }
  return make_packing(d, std::move(kept));
}

PackingCheck verify_packing(const PackingSet& p) {
  PackingCheck chk;
  const std::uint64_t n = corner_count(p.d);
  for (std::size_t i = 0; i < p.members.size(); ++i) {
    if (p.members[i].size() != n) {
      return {false, "member length != 2^d", static_cast<std::int64_t>(i), -1};
    }
    for (auto s : p.members[i].signs) {
      if (s != 1 && s != -1) {
        return {false, "member entry not in {-1,+1}", static_cast<std::int64_t>(i), -1};
      }
    }
  }
  const int floor = packing_distance_floor(p.d);
  int achieved = static_cast<int>(n);
  for (std::size_t i = 0; i < p.members.size(); ++i) {
    for (std::size_t j = i + 1; j < p.members.size(); ++j) {
      const int dist = hamming(p.members[i], p.members[j]);
      if (dist == 0) {
        return {false, "duplicate members", static_cast<std::int64_t>(i),
                static_cast<std::int64_t>(j)};
      }
      if (dist < floor) {
        return {false,
                "pair at Hamming distance " + std::to_string(dist) +
                    " below floor " + std::to_string(floor),
                static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)};
      }
      achieved = std::min(achieved, dist);
    }
  }
  if (p.members.size() >= 2 && achieved != p.min_distance) {
    return {false,
            "stored min_distance " + std::to_string(p.min_distance) +
                " != achieved " + std::to_string(achieved),
            -1, -1};
  }
  return chk;
}

std::string packing_to_json(const PackingSet& p) {
  nlohmann::ordered_json j;
  j["d"] = p.d;
  j["min_distance"] = p.min_distance;
  auto members = nlohmann::ordered_json::array();
  for (const auto& m : p.members) {
    auto row = nlohmann::ordered_json::array();
    for (auto s : m.signs) row.push_back(static_cast<int>(s));
    members.push_back(std::move(row));
  }
  j["members"] = std::move(members);
  return j.dump();
}

PackingSet packing_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PackingSet p;
  p.d = j.at("d").get<std::uint32_t>();
  std::vector<AlphaVector> members;
  for (const auto& row : j.at("members")) {
    members.push_back(make_alpha(row.get<std::vector<int>>()));
  }
  p = make_packing(p.d, std::move(members));
  const int stored = j.at("min_distance").get<int>();
  if (stored != p.min_distance) {
    throw DomainError("packing file min_distance " + std::to_string(stored) +
                      " does not match members (achieved " +
                      std::to_string(p.min_distance) + ")");
  }
  return p;
}

}  // namespace ncvlab

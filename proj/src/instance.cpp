#include "ncvlab/instance.hpp"

#include <cmath>
#include <cstring>
#include <utility>

#include "json.hpp"
#include "ncvlab/errors.hpp"
#include "ncvlab/rng.hpp"

namespace ncvlab {

const char* to_string(Coupling c) {
  return c == Coupling::Signed ? "signed" : "literal";
}

Coupling coupling_from_string(const std::string& s) {
  if (s == "signed") return Coupling::Signed;
  if (s == "literal") return Coupling::Literal;
  throw DomainError("unknown coupling '" + s + "' (expected signed|literal)");
}

void HardnessParams::validate(std::uint32_t cap) const {
  if (d < 1 || d > cap) {
    throw DimensionError("d=" + std::to_string(d) + " outside [1, " +
                         std::to_string(cap) + "]");
  }
  if (!(delta >= 0.0 && delta <= 0.25)) {
    throw DomainError("delta must lie in [0, 1/4], got " + std::to_string(delta));
  }
  if (!(c > 0.0 && c <= 0.125)) {
    throw DomainError("c must lie in (0, 1/8], got " + std::to_string(c));
  }
}

ThetaVector ThetaVector::sampled(std::uint64_t seed, std::uint64_t instance_id,
                                 std::uint32_t d, double delta) {
  ThetaVector t;
  t.count_ = corner_count(d);
  t.scale_ = 0.25 - 0.5 * delta;
  t.seed_ = seed;
  t.id_ = instance_id;
  t.key_ = derive_key(seed, stream::kTheta, instance_id);
  return t;
}

ThetaVector ThetaVector::explicit_values(std::vector<double> values, double delta) {
  const double scale = 0.25 - 0.5 * delta;
  for (double v : values) {
    if (!(v >= 0.0 && v <= scale)) {
      throw DomainError("theta value " + std::to_string(v) + " outside [0, " +
                        std::to_string(scale) + "]");
    }
  }
  ThetaVector t;
  t.count_ = values.size();
  t.scale_ = scale;
  t.values_ = std::move(values);
  return t;
}

double ThetaVector::at(std::uint64_t rank) const {
  if (rank >= count_) {
    throw LengthMismatchError("theta rank " + std::to_string(rank) +
                              " out of range " + std::to_string(count_));
  }
  if (values_) return (*values_)[rank];
  return scale_ * unit_double(hash_at(key_, rank));
}

ThetaVector sample_theta(std::uint64_t seed, std::uint64_t instance_id,
                         std::uint32_t d, double delta) {
  return ThetaVector::sampled(seed, instance_id, d, delta);
}

double lattice_coordinate(int bit, int family) {
  const double h = family == 1 ? 0.5 : 0.25;
  return bit ? h : -h;
}

std::vector<double> lattice_point(std::uint32_t d, std::uint64_t rank, int family) {
  std::vector<double> p(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    p[i] = lattice_coordinate(static_cast<int>((rank >> i) & 1u), family);
  }
  return p;
}

std::vector<LatticeCandidate> all_lattice_candidates(std::uint32_t d) {
  const std::uint64_t n = corner_count(d);
  std::vector<LatticeCandidate> out;
  out.reserve(2 * n);
  for (std::uint64_t r = 0; r < n; ++r) {
    out.push_back({r, 1});
    out.push_back({r, 2});
  }
  return out;
}

double min_lattice_separation(std::uint32_t d) {
  // Same-corner deep/shallow pairs sit d/4 apart; everything else is >= 1/2.
  return std::min(static_cast<double>(d) * 0.25, 0.5);
}

namespace {

void check_point(std::span<const double> x, std::uint32_t d) {
  if (x.size() != d) {
    throw LengthMismatchError("point has " + std::to_string(x.size()) +
                              " coordinates, instance dimension is " +
                              std::to_string(d));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw NonFiniteError("non-finite point coordinate");
  }
}

double l1_to_center(std::span<const double> x, std::uint64_t rank, int family) {
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dist += std::abs(x[i] - lattice_coordinate(static_cast<int>((rank >> i) & 1u),
                                               family));
  }
  return dist;
}

// Nearest candidate of one family: per-coordinate sign rounding.
std::pair<std::uint64_t, double> nearest_candidate(std::span<const double> x,
                                                   int family) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) rank |= std::uint64_t{1} << i;
  }
  return {rank, l1_to_center(x, rank, family)};
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double f1(std::span<const double> x, const CornerIndex& z, double c) {
  check_point(x, z.d);
  double dist = 0.0;
  for (std::uint32_t i = 0; i < z.d; ++i) {
    dist += std::abs(x[i] - lattice_coordinate(z.bit(i), 1));
  }
  return std::min(dist, c);
}

double f2(std::span<const double> x, const CornerIndex& z, double c) {
  check_point(x, z.d);
  double dist = 0.0;
  for (std::uint32_t i = 0; i < z.d; ++i) {
    dist += std::abs(x[i] - lattice_coordinate(z.bit(i), 2));
  }
  return std::min(dist, c);
}

HardInstance::HardInstance(HardnessParams params, AlphaVector alpha,
                           ThetaVector theta, std::uint64_t instance_id)
    : params_(params),
      alpha_(std::move(alpha)),
      theta_(std::move(theta)),
      instance_id_(instance_id) {
  params_.validate();
  const std::uint64_t n = params_.corners();
  if (alpha_.size() != n) {
    throw LengthMismatchError("alpha length " + std::to_string(alpha_.size()) +
                              " != 2^d = " + std::to_string(n));
  }
  if (theta_.size() != n) {
    throw LengthMismatchError("theta length " + std::to_string(theta_.size()) +
                              " != 2^d = " + std::to_string(n));
  }
}

HardInstance HardInstance::generate(const HardnessParams& params, AlphaVector alpha,
                                    std::uint64_t seed, std::uint64_t instance_id) {
  return HardInstance(params, std::move(alpha),
                      ThetaVector::sampled(seed, instance_id, params.d, params.delta),
                      instance_id);
}

double HardInstance::weight_f1(std::uint64_t rank) const {
  const double a = static_cast<double>(alpha_.sign(rank));
  const double t = theta_.at(rank);
  if (params_.coupling == Coupling::Signed) {
    return 0.5 + a * (params_.delta + t);
  }
  return 0.5 + a * params_.delta + t;
}

double HardInstance::evaluate(std::span<const double> x) const {
  check_point(x, params_.d);
  const double c = params_.c;
  const double n = static_cast<double>(params_.corners());
  // At most one lattice point can sit strictly inside its bump: candidate
  // separation is >= 1/4 >= 2c. All other corners contribute exactly c.
  double g = c;
  for (int family : {1, 2}) {
    const auto [rank, dist] = nearest_candidate(x, family);
    if (dist < c) {
      const double w1 = weight_f1(rank);
      const double w = family == 1 ? w1 : 1.0 - w1;
      g += w * (dist - c) / n;
    }
  }
  return g;
}

std::vector<double> HardInstance::subgradient(std::span<const double> x) const {
  check_point(x, params_.d);
  const double c = params_.c;
  const double n = static_cast<double>(params_.corners());
  std::vector<double> grad(params_.d, 0.0);
  for (int family : {1, 2}) {
    const auto [rank, dist] = nearest_candidate(x, family);
    // Inner sign vector on the clip boundary (dist == c); sign(0) = 0.
    if (dist <= c) {
      const double w1 = weight_f1(rank);
      const double w = family == 1 ? w1 : 1.0 - w1;
      for (std::uint32_t i = 0; i < params_.d; ++i) {
        const double m = lattice_coordinate(static_cast<int>((rank >> i) & 1u), family);
        grad[i] += w * static_cast<double>(sign_of(x[i] - m)) / n;
      }
    }
  }
  return grad;
}

GlobalMin HardInstance::global_min() const {
  const std::uint64_t n = params_.corners();
  // Depth coefficient of candidate (z, family) is the weight of the bump
  // suppressed at its center; smaller is deeper. Strict improvement plus a
  // deep-candidate-first scan makes ties resolve to the lowest corner rank.
  double best_coeff = 2.0;
  std::uint64_t best_rank = 0;
  int best_family = 1;
  for (std::uint64_t rank = 0; rank < n; ++rank) {
    const double w1 = weight_f1(rank);
    int first_family = 1;
    if (params_.coupling == Coupling::Signed && alpha_.sign(rank) < 0) {
      first_family = 2;
    }
    for (int k = 0; k < 2; ++k) {
      const int family = k == 0 ? first_family : 3 - first_family;
      const double coeff = family == 1 ? 1.0 - w1 : w1;
      if (coeff < best_coeff) {
        best_coeff = coeff;
        best_rank = rank;
        best_family = family;
      }
    }
  }
  GlobalMin gm;
  gm.corner_rank = best_rank;
  gm.family = best_family;
  gm.point = lattice_point(params_.d, best_rank, best_family);
  gm.value = evaluate(gm.point);
  return gm;
}

std::string HardInstance::to_json() const {
  if (!theta_.generated()) {
    throw DomainError("only generated-theta instances serialize; "
                      "theta is recomputed from (seed, instance_id) on load");
  }
  nlohmann::ordered_json j;
  j["d"] = params_.d;
  j["delta"] = params_.delta;
  j["c"] = params_.c;
  j["coupling"] = to_string(params_.coupling);
  j["seed"] = theta_.seed();
  j["instance_id"] = instance_id_;
  auto alpha = nlohmann::ordered_json::array();
  for (auto s : alpha_.signs) alpha.push_back(static_cast<int>(s));
  j["alpha"] = std::move(alpha);
  return j.dump();
}

HardInstance HardInstance::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  HardnessParams p;
  p.d = j.at("d").get<std::uint32_t>();
  p.delta = j.at("delta").get<double>();
  p.c = j.at("c").get<double>();
  p.coupling = coupling_from_string(j.at("coupling").get<std::string>());
  const auto seed = j.at("seed").get<std::uint64_t>();
  const auto id = j.at("instance_id").get<std::uint64_t>();
  auto alpha = make_alpha(j.at("alpha").get<std::vector<int>>());
  return HardInstance::generate(p, std::move(alpha), seed, id);
}

}  // namespace ncvlab

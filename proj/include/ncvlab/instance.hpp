#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncvlab/geometry.hpp"

namespace ncvlab {

// How the depth offset theta enters the f1 weight. Under Signed the weight is
// 1/2 + alpha_z * (delta + theta_z), which keeps the global-minimum
// characterization and the KL pairing (1/2 + delta + theta vs 1/2 - delta -
// theta) consistent; Literal adds theta_z regardless of the sign of alpha_z
// and is kept for fidelity experiments.
enum class Coupling { Signed, Literal };

const char* to_string(Coupling c);
Coupling coupling_from_string(const std::string& s);

struct HardnessParams {
  std::uint32_t d = 1;
  double delta = 0.1;
  double c = 0.125;
  Coupling coupling = Coupling::Signed;

  void validate(std::uint32_t cap = kDefaultDimensionCap) const;
  double theta_scale() const { return 0.25 - 0.5 * delta; }
  std::uint64_t corners() const { return corner_count(d); }

  bool operator==(const HardnessParams&) const = default;
};

// Per-corner depth offsets in [0, 1/4 - delta/2). Each value is a pure
// function of (seed, instance id, corner rank), so materialization order and
// concurrency cannot change it. Explicit values (closed upper endpoint
// allowed) exist for brute-force enumeration and tests.
class ThetaVector {
 public:
  static ThetaVector sampled(std::uint64_t seed, std::uint64_t instance_id,
                             std::uint32_t d, double delta);
  static ThetaVector explicit_values(std::vector<double> values, double delta);

  double at(std::uint64_t rank) const;
  std::uint64_t size() const { return count_; }
  bool generated() const { return !values_.has_value(); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t instance_id() const { return id_; }

 private:
  std::uint64_t count_ = 0;
  double scale_ = 0.0;
  std::uint64_t key_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t id_ = 0;
  std::optional<std::vector<double>> values_;
};

ThetaVector sample_theta(std::uint64_t seed, std::uint64_t instance_id,
                         std::uint32_t d, double delta);

// Candidate minimizer lattice. Family 1 is the deep pair (2z-1)/2 in
// {-1/2,+1/2}^d, family 2 the shallow pair (2z-1)/4 in {-1/4,+1/4}^d.
struct LatticeCandidate {
  std::uint64_t rank = 0;
  int family = 1;
};

double lattice_coordinate(int bit, int family);
std::vector<double> lattice_point(std::uint32_t d, std::uint64_t rank, int family);
std::vector<LatticeCandidate> all_lattice_candidates(std::uint32_t d);
double min_lattice_separation(std::uint32_t d);

// Bump pair of Eq-style form: f1 = min(||x - (2z-1)/2||_1, c),
// f2 = min(||x - (2z-1)/4||_1, c).
double f1(std::span<const double> x, const CornerIndex& z, double c);
double f2(std::span<const double> x, const CornerIndex& z, double c);

struct GlobalMin {
  std::vector<double> point;
  double value = 0.0;
  std::uint64_t corner_rank = 0;
  int family = 1;
};

// One member of the hard family: packing element alpha, depth vector theta,
// hardness parameters. Immutable after construction and safe to share across
// threads.
class HardInstance {
 public:
  HardInstance(HardnessParams params, AlphaVector alpha, ThetaVector theta,
               std::uint64_t instance_id);

  // Standard construction: theta derived from (seed, instance_id).
  static HardInstance generate(const HardnessParams& params, AlphaVector alpha,
                               std::uint64_t seed, std::uint64_t instance_id);

  const HardnessParams& params() const { return params_; }
  const AlphaVector& alpha() const { return alpha_; }
  const ThetaVector& theta() const { return theta_; }
  std::uint64_t instance_id() const { return instance_id_; }

  // Weight on f1 at corner z; also the coin bias of the oracle protocol.
  double weight_f1(std::uint64_t rank) const;

  double evaluate(std::span<const double> x) const;
  std::vector<double> subgradient(std::span<const double> x) const;
  GlobalMin global_min() const;

  std::string to_json() const;  // generated-theta instances only
  static HardInstance from_json(const std::string& text);

 private:
  HardnessParams params_;
  AlphaVector alpha_;
  ThetaVector theta_;
  std::uint64_t instance_id_ = 0;
};

}  // namespace ncvlab

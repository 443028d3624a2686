#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncvlab/instance.hpp"

namespace ncvlab {

// An algorithm's guess of the minimizer locations. Points must be pairwise
// more than c apart in L1. When complete, exactly one lattice candidate is
// assigned per corner.
struct ReconstructionSet {
  std::vector<std::vector<double>> points;
  std::optional<std::vector<LatticeCandidate>> assignment;  // set when complete

  bool complete() const { return assignment.has_value(); }
  bool empty() const { return points.empty(); }
};

// One lattice pick (family 1 or 2) per corner rank.
ReconstructionSet complete_reconstruction(std::uint32_t d,
                                          std::span<const int> family_per_rank);

void validate_separation(const ReconstructionSet& s, double c);

// Sum over S of g(x) - inf g; the per-element error both rho and the error
// functional are built from. Checks separation.
double excess_error(const HardInstance& g, const ReconstructionSet& s);

// Discrepancy premetric, per-element form:
// rho = sum_{x in S} [(gA(x) - inf gA) + (gB(x) - inf gB)].
double rho(const HardInstance& a, const HardInstance& b,
           const ReconstructionSet& s);

struct PsiWitness {
  std::size_t alpha_idx = 0, beta_idx = 0;
  std::string theta_a, theta_b;  // grid indices per corner
  std::string picks;             // family pick per corner
  double rho = 0.0;
};

struct PsiResult {
  double value = 0.0;
  std::vector<PsiWitness> witnesses;  // per pair, its minimizing configuration
};

// Exact minimum of rho over distinct packing pairs, per-corner theta grids
// over [0, 1/4 - delta/2] (both endpoints included), and all complete
// reconstructions. d <= 3.
PsiResult psi_bruteforce(const HardnessParams& params, const PackingSet& packing,
                         int theta_grid_steps = 2);

std::string psi_witness_csv(const PsiResult& r);

struct Lemma1Result {
  int count = 0;
  std::vector<std::size_t> passing;
};

// How many instances have excess error <= psi/3 on S. The discrepancy bound
// implies at most one can.
Lemma1Result lemma1_check(const std::vector<HardInstance>& instances,
                          const ReconstructionSet& s, double psi);

}  // namespace ncvlab

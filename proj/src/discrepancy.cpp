#include "ncvlab/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ncvlab/errors.hpp"

namespace ncvlab {

ReconstructionSet complete_reconstruction(std::uint32_t d,
                                          std::span<const int> family_per_rank) {
  const std::uint64_t n = corner_count(d);
  if (family_per_rank.size() != n) {
    throw LengthMismatchError("complete reconstruction needs one pick per corner");
  }
  ReconstructionSet s;
  s.points.reserve(n);
  std::vector<LatticeCandidate> picks;
  picks.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    const int fam = family_per_rank[r];
    if (fam != 1 && fam != 2) {
      throw DomainError("family pick must be 1 or 2");
    }
    s.points.push_back(lattice_point(d, r, fam));
    picks.push_back({r, fam});
  }
  s.assignment = std::move(picks);
  return s;
}

namespace {

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

}  // namespace

void validate_separation(const ReconstructionSet& s, double c) {
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    for (std::size_t j = i + 1; j < s.points.size(); ++j) {
      if (s.points[i].size() != s.points[j].size()) {
        throw LengthMismatchError("reconstruction points of mixed dimension");
      }
      const double dist = l1(s.points[i], s.points[j]);
      if (!(dist > c)) {
        throw SeparationError("reconstruction points " + std::to_string(i) +
                              " and " + std::to_string(j) + " at L1 distance " +
                              std::to_string(dist) + " <= c");
      }
    }
  }
}

double excess_error(const HardInstance& g, const ReconstructionSet& s) {
  validate_separation(s, g.params().c);
  if (s.points.empty()) return 0.0;
  const double inf_g = g.global_min().value;
  double acc = 0.0;
  for (const auto& x : s.points) {
    acc += g.evaluate(x) - inf_g;
  }
  return acc;
}

double rho(const HardInstance& a, const HardInstance& b,
           const ReconstructionSet& s) {
  if (!(a.params() == b.params())) {
    throw ParameterMismatchError("rho: instances with different hardness params");
  }
  if (s.points.empty()) {
    throw DomainError("rho requires a nonempty reconstruction set");
  }
  return excess_error(a, s) + excess_error(b, s);
}

namespace {

// Depth coefficient of candidate (z, family): the weight of the bump that is
// suppressed at its center. g at the center is ((n-1)c + coeff*c)/n.
inline double candidate_coeff(double w1, int family) {
  return family == 1 ? 1.0 - w1 : w1;
}

inline double weight_from(double alpha, double delta, double theta, Coupling coupling) {
  return coupling == Coupling::Signed ? 0.5 + alpha * (delta + theta)
                                      : 0.5 + alpha * delta + theta;
}

std::string joined(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

}  // namespace

PsiResult psi_bruteforce(const HardnessParams& params, const PackingSet& packing,
                         int theta_grid_steps) {
  params.validate();
  if (params.d > 3) {
    throw DimensionError("psi_bruteforce supports d <= 3");
  }
  if (theta_grid_steps < 2) {
    throw DomainError("theta_grid_steps must be >= 2");
  }
  if (packing.d != params.d) {
    throw ParameterMismatchError("packing dimension != params dimension");
  }
  if (packing.members.size() < 2) {
    throw DomainError("psi needs at least two packing members");
  }

  const std::uint64_t n = params.corners();
  const double scale = params.theta_scale();
  std::vector<double> grid(theta_grid_steps);
  for (int i = 0; i < theta_grid_steps; ++i) {
    grid[i] = scale * static_cast<double>(i) / static_cast<double>(theta_grid_steps - 1);
  }

  PsiResult result;
  result.value = std::numeric_limits<double>::infinity();

  std::vector<int> ia(n, 0), ib(n, 0);
  std::vector<double> wa(n), wb(n);

  auto advance = [&](std::vector<int>& idx) {
    for (std::uint64_t k = 0; k < n; ++k) {
      if (++idx[k] < theta_grid_steps) return true;
      idx[k] = 0;
    }
    return false;
  };

  for (std::size_t aidx = 0; aidx < packing.members.size(); ++aidx) {
    for (std::size_t bidx = aidx + 1; bidx < packing.members.size(); ++bidx) {
      const AlphaVector& alpha = packing.members[aidx];
      const AlphaVector& beta = packing.members[bidx];
      PsiWitness best;
      best.alpha_idx = aidx;
      best.beta_idx = bidx;
      best.rho = std::numeric_limits<double>::infinity();

      std::fill(ia.begin(), ia.end(), 0);
      do {
        for (std::uint64_t z = 0; z < n; ++z) {
          wa[z] = weight_from(alpha.sign(z), params.delta, grid[ia[z]],
                              params.coupling);
        }
        double inf_a = 2.0;
        for (std::uint64_t z = 0; z < n; ++z) {
          inf_a = std::min({inf_a, 1.0 - wa[z], wa[z]});
        }
        std::fill(ib.begin(), ib.end(), 0);
        do {
          for (std::uint64_t z = 0; z < n; ++z) {
            wb[z] = weight_from(beta.sign(z), params.delta, grid[ib[z]],
                                params.coupling);
          }
          double inf_b = 2.0;
          for (std::uint64_t z = 0; z < n; ++z) {
            inf_b = std::min({inf_b, 1.0 - wb[z], wb[z]});
          }
          // inf over complete reconstructions decomposes per corner: every
          // non-picked corner contributes the plateau c to both functions.
          double sum = 0.0;
          std::vector<int> picks(n, 1);
          for (std::uint64_t z = 0; z < n; ++z) {
            const double deep = candidate_coeff(wa[z], 1) + candidate_coeff(wb[z], 1);
            const double shallow =
                candidate_coeff(wa[z], 2) + candidate_coeff(wb[z], 2);
            if (shallow < deep) {
              picks[z] = 2;
              sum += shallow;
            } else {
              sum += deep;
            }
          }
          const double r = params.c / static_cast<double>(n) *
                           (sum - static_cast<double>(n) * (inf_a + inf_b));
          if (r < best.rho) {
            best.rho = r;
            best.theta_a = joined(ia);
            best.theta_b = joined(ib);
            best.picks = joined(picks);
          }
        } while (advance(ib));
      } while (advance(ia));

      result.value = std::min(result.value, best.rho);
      result.witnesses.push_back(std::move(best));
    }
  }
  return result;
}

std::string psi_witness_csv(const PsiResult& r) {
  std::ostringstream os;
  os << "alpha_idx,beta_idx,theta_config,S_config,rho\n";
  os.precision(17);
  for (const auto& w : r.witnesses) {
    os << w.alpha_idx << ',' << w.beta_idx << ',' << w.theta_a << '|' << w.theta_b
       << ',' << w.picks << ',' << w.rho << '\n';
  }
  return os.str();
}

Lemma1Result lemma1_check(const std::vector<HardInstance>& instances,
                          const ReconstructionSet& s, double psi) {
  Lemma1Result r;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (i > 0 && !(instances[i].params() == instances[0].params())) {
      throw ParameterMismatchError("lemma1_check: instances differ in params");
    }
    if (excess_error(instances[i], s) <= psi / 3.0) {
      r.passing.push_back(i);
    }
  }
  r.count = static_cast<int>(r.passing.size());
  return r;
}

}  // namespace ncvlab

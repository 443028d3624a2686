#pragma once

// Test-only oracles, kept independent of the library's fast paths: explicit
// 2^d-term summation for g, central finite differences for the subgradient,
// and full (subset x outcome) enumeration for the oracle's expectation.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ncvlab/instance.hpp"
#include "ncvlab/oracle.hpp"
#include "ncvlab/rng.hpp"

namespace ncvlab::testing {

// g(x) by direct summation of all 2^d corner terms.
inline double reference_evaluate(const HardInstance& g, std::span<const double> x) {
  const auto& p = g.params();
  const std::uint64_t n = p.corners();
  double acc = 0.0;
  for (std::uint64_t z = 0; z < n; ++z) {
    const CornerIndex corner{p.d, z};
    const double w1 = g.weight_f1(z);
    acc += w1 * f1(x, corner, p.c) + (1.0 - w1) * f2(x, corner, p.c);
  }
  return acc / static_cast<double>(n);
}

// Central finite differences of evaluate.
inline std::vector<double> fd_gradient(const HardInstance& g,
                                       std::span<const double> x,
                                       double h = 1e-6) {
  std::vector<double> grad(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = g.evaluate(probe);
    probe[i] = x[i] - h;
    const double down = g.evaluate(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Exact E[g_hat(x)]: average over all ell-subsets and all coin outcomes,
// weighted by their probabilities.
inline double exact_expected_g_hat(const HardInstance& g, std::span<const double> x,
                                   std::uint32_t ell) {
  const auto& p = g.params();
  const std::uint64_t n = p.corners();
  std::vector<std::uint64_t> subset(ell);
  for (std::uint32_t i = 0; i < ell; ++i) subset[i] = i;
  auto next_subset = [&]() {
    std::uint32_t i = ell;
    while (i-- > 0) {
      if (subset[i] + (ell - i) < n) {
        ++subset[i];
        for (std::uint32_t j = i + 1; j < ell; ++j) subset[j] = subset[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  double total = 0.0;
  double n_subsets = 0.0;
  do {
    const std::uint64_t outcomes = std::uint64_t{1} << ell;
    for (std::uint64_t y = 0; y < outcomes; ++y) {
      double prob = 1.0;
      std::vector<std::uint8_t> bits(ell);
      for (std::uint32_t i = 0; i < ell; ++i) {
        const double bias = g.weight_f1(subset[i]);
        const bool b = (y >> i) & 1u;
        bits[i] = b ? 1 : 0;
        prob *= b ? bias : 1.0 - bias;
      }
      const OracleAnswer a = answer_for_coins(g, x, subset, bits);
      total += prob * a.g_hat;
    }
    n_subsets += 1.0;
  } while (next_subset());
  return total / n_subsets;
}

// Kink avoidance: componentwise distance from every lattice coordinate value
// and from both clip boundaries must exceed margin.
inline bool near_kink(const HardInstance& g, std::span<const double> x,
                      double margin = 1e-4) {
  static const double levels[] = {-0.5, -0.25, 0.25, 0.5};
  for (double v : x) {
    for (double m : levels) {
      if (std::abs(v - m) <= margin) return true;
    }
    if (std::abs(v) <= margin) return true;  // sign-rounding boundary
  }
  const auto& p = g.params();
  for (int family : {1, 2}) {
    std::uint64_t rank = 0;
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > 0.0) rank |= std::uint64_t{1} << i;
      dist += std::abs(x[i] - lattice_coordinate(x[i] > 0.0 ? 1 : 0, family));
    }
    if (std::abs(dist - p.c) <= margin) return true;
  }
  return false;
}

inline std::vector<double> random_point(std::uint32_t d, CounterRng& rng,
                                        double half_width = 1.0) {
  std::vector<double> x(d);
  for (double& v : x) v = (2.0 * rng.next_unit() - 1.0) * half_width;
  return x;
}

}  // namespace ncvlab::testing

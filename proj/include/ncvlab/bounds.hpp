#pragma once

#include <cstdint>

#include "ncvlab/geometry.hpp"

namespace ncvlab {

// Natural log throughout; the constant ln(2/sqrt(e)) = ln 2 - 1/2.
inline constexpr double kLogTwoOverSqrtE = 0.19314718055994531;

struct BoundReport {
  double raw = 0.0;
  double clamped = 0.0;  // max(raw, 0) for probability-type bounds
  bool vacuous = false;  // raw < 0
};

// KL divergence between Bernoulli(p) and Bernoulli(q), in nats. Open (0,1)
// domain on both arguments.
double kl_bernoulli(double p, double q);

struct KlDeltaThetaReport {
  double value = 0.0;       // KL(Bern(1/2+d+t) || Bern(1/2-d-t))
  double quad_bound = 0.0;  // 8 (delta+theta0)^2 / (1 - 2 delta - 2 theta0)
  double sup_form = 0.0;    // (1+2 delta)^2 / (1-2 delta), the sup over theta0
  double sup_bound = 0.0;   // 2 (1+2 delta)^2
};

// value <= quad_bound <= sup_form <= sup_bound whenever delta <= 1/4.
KlDeltaThetaReport kl_delta_theta(double delta, double theta0);

// Packing-identification lower bound:
// 1 - 2 (ell T (1+2 delta)^2 + ln 2) / (2^d ln(2/sqrt(e))).
BoundReport fano_rhs(std::uint32_t d, std::uint32_t ell, std::uint64_t T,
                     double delta);

// Latent-conditioned form: 1 - (mi_sup + ln 2) / ln |V|.
BoundReport fano_latent_rhs(std::size_t packing_size, double mi_sup);

// Exact single-round mutual information I((U_1, Y_1); alpha | theta = theta0)
// by full enumeration of (subset, outcome) pairs, alpha uniform over the
// packing. d <= 3. Nats.
double mi_exact_small(std::uint32_t d, std::uint32_t ell, double delta,
                      double theta0, const PackingSet& packing);

struct TheoremOneBound {
  double t_min_exact = 0.0;  // exact solve of the Fano RHS = 1/3 at delta = 144 eps
  double t_order = 0.0;      // 2^d / (ell eps^2), the Omega scale
};

// Query lower bound; requires eps <= 1/576 so delta = 144 eps stays <= 1/4.
TheoremOneBound theorem1_T_lower(std::uint32_t d, std::uint32_t ell, double eps);

struct RateComparison {
  double nonadaptive = 0.0;  // T^(-1/d)
  double adaptive = 0.0;     // sqrt(2^d / T)
};

RateComparison compare_nonadaptive(std::uint64_t T, std::uint32_t d);

}  // namespace ncvlab

#include "ncvlab/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ncvlab/errors.hpp"

namespace ncvlab {

namespace {

BoundReport report_from_raw(double raw) {
  BoundReport r;
  r.raw = raw;
  r.clamped = std::max(raw, 0.0);
  r.vacuous = raw < 0.0;
  return r;
}

}  // namespace

double kl_bernoulli(double p, double q) {
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) {
    throw DomainError("kl_bernoulli needs p, q in the open interval (0, 1)");
  }
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

KlDeltaThetaReport kl_delta_theta(double delta, double theta0) {
  if (!(delta >= 0.0 && delta <= 0.25)) {
    throw DomainError("kl_delta_theta needs delta in [0, 1/4]");
  }
  const double scale = 0.25 - 0.5 * delta;
  if (!(theta0 >= 0.0 && theta0 <= scale)) {
    throw DomainError("kl_delta_theta needs theta0 in [0, 1/4 - delta/2]");
  }
  const double s = delta + theta0;
  if (!(2.0 * s < 1.0)) {
    throw DomainError("kl_delta_theta needs 2(delta + theta0) < 1");
  }
  KlDeltaThetaReport r;
  r.value = s == 0.0 ? 0.0 : kl_bernoulli(0.5 + s, 0.5 - s);
  r.quad_bound = 8.0 * s * s / (1.0 - 2.0 * s);
  const double one_plus = 1.0 + 2.0 * delta;
  r.sup_form = one_plus * one_plus / (1.0 - 2.0 * delta);
  r.sup_bound = 2.0 * one_plus * one_plus;
  return r;
}

BoundReport fano_rhs(std::uint32_t d, std::uint32_t ell, std::uint64_t T,
                     double delta) {
  if (ell < 1 || static_cast<std::uint64_t>(ell) > corner_count(d)) {
    throw DomainError("fano_rhs needs 1 <= ell <= 2^d");
  }
  if (!(delta >= 0.0 && delta <= 0.25)) {
    throw DomainError("fano_rhs needs delta in [0, 1/4]");
  }
  const double one_plus = 1.0 + 2.0 * delta;
  const double numer = 2.0 * (static_cast<double>(ell) * static_cast<double>(T) *
                                  one_plus * one_plus +
                              std::numbers::ln2);
  const double denom = std::ldexp(1.0, static_cast<int>(d)) * kLogTwoOverSqrtE;
  return report_from_raw(1.0 - numer / denom);
}

BoundReport fano_latent_rhs(std::size_t packing_size, double mi_sup) {
  if (packing_size < 2) {
    throw DomainError("fano_latent_rhs needs |V| >= 2");
  }
  if (!(mi_sup >= 0.0)) {
    throw DomainError("fano_latent_rhs needs mi_sup >= 0");
  }
  const double raw =
      1.0 - (mi_sup + std::numbers::ln2) / std::log(static_cast<double>(packing_size));
  return report_from_raw(raw);
}

double mi_exact_small(std::uint32_t d, std::uint32_t ell, double delta,
                      double theta0, const PackingSet& packing) {
  if (d > 3) throw DimensionError("mi_exact_small supports d <= 3");
  const std::uint64_t n = corner_count(d);
  if (ell < 1 || ell > n) throw DomainError("mi_exact_small needs 1 <= ell <= 2^d");
  if (packing.d != d) {
    throw ParameterMismatchError("packing dimension != d");
  }
  if (!(delta >= 0.0 && delta <= 0.25)) {
    throw DomainError("mi_exact_small needs delta in [0, 1/4]");
  }
  if (!(theta0 >= 0.0 && theta0 <= 0.25 - 0.5 * delta)) {
    throw DomainError("mi_exact_small needs theta0 in [0, 1/4 - delta/2]");
  }
  const std::size_t v = packing.members.size();
  if (v < 2) return 0.0;

  // Conditioned on theta = theta0, corner z's coin has bias
  // 1/2 + alpha_z (delta + theta0).
  const double s = delta + theta0;
  auto bias = [&](const AlphaVector& alpha, std::uint64_t z) {
    return 0.5 + static_cast<double>(alpha.sign(z)) * s;
  };

  // All ell-subsets of {0..n-1}.
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

  // I((U,Y); alpha) = I(Y; alpha | U): the subset is drawn independently of
  // alpha, so averaging the conditional term over subsets is exact.
  double subsets = 0.0;
  double total = 0.0;
  std::vector<double> p_alpha(v);
  const std::uint64_t outcomes = std::uint64_t{1} << ell;
  do {
    for (std::uint64_t y = 0; y < outcomes; ++y) {
      double mix = 0.0;
      for (std::size_t a = 0; a < v; ++a) {
        double prob = 1.0;
        for (std::uint32_t i = 0; i < ell; ++i) {
          const double b = bias(packing.members[a], subset[i]);
          prob *= ((y >> i) & 1u) ? b : 1.0 - b;
        }
        p_alpha[a] = prob;
        mix += prob;
      }
      mix /= static_cast<double>(v);
      for (std::size_t a = 0; a < v; ++a) {
        if (p_alpha[a] > 0.0) {
          total += p_alpha[a] / static_cast<double>(v) * std::log(p_alpha[a] / mix);
        }
      }
    }
    subsets += 1.0;
  } while (next_subset());

  return total / subsets;
}

TheoremOneBound theorem1_T_lower(std::uint32_t d, std::uint32_t ell, double eps) {
  if (!(eps > 0.0 && eps <= 1.0 / 576.0)) {
    throw DomainError("theorem1_T_lower needs eps in (0, 1/576] so that "
                      "delta = 144 eps stays within [0, 1/4]");
  }
  if (ell < 1 || static_cast<std::uint64_t>(ell) > corner_count(d)) {
    throw DomainError("theorem1_T_lower needs 1 <= ell <= 2^d");
  }
  const double pow2d = std::ldexp(1.0, static_cast<int>(d));
  const double one_plus = 1.0 + 288.0 * eps;  // 1 + 2 delta at delta = 144 eps
  TheoremOneBound b;
  b.t_min_exact = (pow2d * kLogTwoOverSqrtE / 3.0 - std::numbers::ln2) /
                  (static_cast<double>(ell) * one_plus * one_plus);
  b.t_order = pow2d / (static_cast<double>(ell) * eps * eps);
  return b;
}

RateComparison compare_nonadaptive(std::uint64_t T, std::uint32_t d) {
  if (T < 1 || d < 1) {
    throw DomainError("compare_nonadaptive needs T >= 1 and d >= 1");
  }
  RateComparison r;
  // exp2/log2 so that powers of two come out exact.
  r.nonadaptive = std::exp2(-std::log2(static_cast<double>(T)) /
                            static_cast<double>(d));
  r.adaptive = std::sqrt(std::ldexp(1.0, static_cast<int>(d)) /
                         static_cast<double>(T));
  return r;
}

}  // namespace ncvlab

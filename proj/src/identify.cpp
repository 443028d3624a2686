#include "ncvlab/identify.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ncvlab/errors.hpp"

namespace ncvlab {

double error_eT(const HardInstance& g, const ReconstructionSet& s) {
  return excess_error(g, s);
}

IdentificationResult hypothesis_test(const ReconstructionSet& s,
                                     const std::vector<HardInstance>& candidates,
                                     double psi, CounterRng& rng) {
  if (candidates.empty()) {
    throw DomainError("hypothesis_test needs at least one candidate");
  }
  if (!(psi > 0.0)) {
    throw DomainError("hypothesis_test needs psi > 0");
  }
  std::vector<double> errors(candidates.size());
  std::vector<std::size_t> passing;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!(candidates[i].params() == candidates[0].params())) {
      throw ParameterMismatchError("hypothesis_test: candidates differ in params");
    }
    errors[i] = excess_error(candidates[i], s);
    if (errors[i] <= psi / 3.0) passing.push_back(i);
  }
  if (passing.size() > 1) {
    throw BrokenInvariantError(
        "two instances within psi/3 of the same set (indices " +
        std::to_string(passing[0]) + ", " + std::to_string(passing[1]) +
        "); contradicts the uniqueness lemma");
  }
  IdentificationResult r;
  if (passing.size() == 1) {
    r.chosen = passing[0];
    r.matched = true;
  } else {
    r.chosen = static_cast<std::size_t>(rng.next_below(candidates.size()));
    r.matched = false;
  }
  r.achieved_error = errors[r.chosen];
  return r;
}

std::size_t ml_alpha_estimator(const Transcript& transcript,
                               const std::vector<HardInstance>& candidates,
                               ThetaHypothesis hypothesis) {
  if (candidates.empty()) {
    throw DomainError("ml_alpha_estimator needs at least one candidate");
  }
  if (!transcript.has_coin_view()) {
    throw MissingCoinViewError("ml_alpha_estimator needs the analyst view "
                               "(coin records)");
  }
  const auto& params = candidates[0].params();
  std::size_t best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cand = candidates[i];
    double ll = 0.0;
    for (std::size_t t = 0; t < transcript.rounds(); ++t) {
      const auto& coins = transcript.round(t).coins;
      for (std::size_t k = 0; k < coins.chosen.size(); ++k) {
        const std::uint64_t z = coins.chosen[k];
        const double bias =
            hypothesis == ThetaHypothesis::Known
                ? cand.weight_f1(z)
                : 0.5 + static_cast<double>(cand.alpha().sign(z)) * params.delta;
        ll += coins.outcomes[k] ? std::log(bias) : std::log1p(-bias);
      }
    }
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }
  return best;
}

}  // namespace ncvlab

#pragma once

#include <cstdint>
#include <vector>

#include "ncvlab/discrepancy.hpp"
#include "ncvlab/oracle.hpp"
#include "ncvlab/rng.hpp"

namespace ncvlab {

struct IdentificationResult {
  std::size_t chosen = 0;
  bool matched = false;  // true when the threshold test fired
  double achieved_error = 0.0;
};

// Error of a reconstruction: sum over S of g(x) - inf g. Empty S allowed.
double error_eT(const HardInstance& g, const ReconstructionSet& s);

// Threshold test: the unique candidate with error <= psi/3 when one exists,
// a uniform random fallback when none does. Two or more passing contradicts
// the uniqueness property and throws BrokenInvariantError.
IdentificationResult hypothesis_test(const ReconstructionSet& s,
                                     const std::vector<HardInstance>& candidates,
                                     double psi, CounterRng& rng);

enum class ThetaHypothesis { Zero, Known };

// Maximum-likelihood alpha estimate from the analyst view of a transcript:
// argmax over candidates of the log-likelihood of the observed (U_t, X_t)
// under that candidate's coin biases. Ties go to the lowest index.
std::size_t ml_alpha_estimator(const Transcript& transcript,
                               const std::vector<HardInstance>& candidates,
                               ThetaHypothesis hypothesis);

}  // namespace ncvlab

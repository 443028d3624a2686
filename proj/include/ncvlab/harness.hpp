#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncvlab/discrepancy.hpp"
#include "ncvlab/identify.hpp"
#include "ncvlab/oracle.hpp"

namespace ncvlab {

// Search domain box half-width; the candidate lattice lives in [-1/2, 1/2]^d.
inline constexpr double kDomainHalfWidth = 1.0;

enum class OptimizerKind { Sgd, GdRestarts, PerturbedGd, RandomSearch, LatticeSweep };

const char* to_string(OptimizerKind k);
OptimizerKind optimizer_kind_from_string(const std::string& s);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::RandomSearch;
  double step_size = 0.02;          // sgd, gd_restarts, perturbed_gd
  int restarts = 8;                 // gd_restarts
  double perturbation = 0.05;       // perturbed_gd
  int samples_per_estimate = 32;    // random_search, lattice_sweep, sgd dwell

  std::string name() const { return to_string(kind); }
  void validate() const;
};

enum class ReconstructPolicy { SnapBest, VisitedTopK };

struct BenchmarkConfig {
  HardnessParams params;
  OracleConfig oracle;  // its seed field is ignored; per-trial seeds are derived
  std::uint64_t budget = 0;
  int trials = 1;
  std::vector<OptimizerSpec> optimizers;
  std::uint64_t seed = 0;
  double tolerance = 0.0;  // success is eps_T <= tolerance on a nonempty set
  ReconstructPolicy policy = ReconstructPolicy::VisitedTopK;
  int top_k = 1;

  void validate() const;
};

// Identification-chain tolerance: psi/9 when a brute-force psi is available,
// otherwise the analytic floor (delta c / 2) / 9.
double lemma2_tolerance(const HardnessParams& params,
                        std::optional<double> psi = std::nullopt);

// Single-point identification tolerance: one Hamming unit of the discrepancy
// bound, (2 delta c / 2^d) / 9. Scales with the per-element error of a one-
// point reconstruction, which the full-set psi/9 budget does not.
double per_point_tolerance(const HardnessParams& params);

struct BenchmarkRecord {
  std::string optimizer;
  std::size_t alpha_idx = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  double epsilon = 0.0;
  bool success = false;
  bool identified = false;  // hypothesis test (or its fallback) chose the true alpha
  bool matched = false;     // the threshold test fired rather than the fallback
  double wall_ms = 0.0;     // never serialized; exports must stay byte-stable
};

// Build the algorithm's reconstruction from the algorithm view of a
// transcript. SnapBest averages observed g_hat within L1 radius c of each
// lattice candidate and assigns the lower estimate per corner (deep default
// for unvisited corners); VisitedTopK keeps the k best visited points by
// per-point mean g_hat after L1-separation filtering.
ReconstructionSet reconstruct_set(const Transcript& transcript,
                                  const HardnessParams& params,
                                  ReconstructPolicy policy, int top_k = 1);

// Drives one optimizer through at most config.budget queries (algorithm view
// only), reconstructs, and scores. The hypothesis test runs only for complete
// (SnapBest) reconstructions, where the threshold passer is provably unique.
BenchmarkRecord run_trial(const OptimizerSpec& spec, const HardInstance& instance,
                          const std::vector<HardInstance>& candidates,
                          const BenchmarkConfig& config, std::size_t alpha_idx,
                          int trial, std::optional<double> psi);

struct CurvePoint {
  std::uint64_t T = 0;
  double success_rate = 0.0;
  double mean_eps = 0.0;
  double se_eps = 0.0;
  double worst_alpha_mean_eps = 0.0;
};

std::vector<CurvePoint> empirical_success_curve(const OptimizerSpec& spec,
                                                const BenchmarkConfig& config,
                                                const PackingSet& packing,
                                                const std::vector<std::uint64_t>& T_grid);

struct RequiredT {
  bool found = false;
  std::uint64_t T = 0;
  double rate = 0.0;
};

// Smallest budget on a geometric grid reaching the target success rate.
RequiredT required_budget(const OptimizerSpec& spec, const BenchmarkConfig& base,
                          const PackingSet& packing, double target_rate,
                          std::uint64_t T_start, std::uint64_t T_cap,
                          double grid_factor = 1.5);

struct RiskRow {
  std::string optimizer;
  std::size_t alpha_idx = 0;
  int trials = 0;
  double mean_eps = 0.0;
  double stderr_eps = 0.0;
  bool worst_case = false;  // this alpha is the optimizer's worst case
};

struct RiskTable {
  std::vector<RiskRow> rows;
  double minimax_value = 0.0;  // min over optimizers of the worst-case mean
  std::string best_optimizer;
};

// Empirical plug-in of the minimax risk: sup over packing members, mean over
// oracle randomness, min across optimizers.
RiskTable minimax_risk_estimate(const std::vector<OptimizerSpec>& optimizers,
                                const PackingSet& packing,
                                const HardnessParams& params,
                                const OracleConfig& oracle, std::uint64_t T,
                                int trials, std::uint64_t seed,
                                ReconstructPolicy policy = ReconstructPolicy::SnapBest,
                                int top_k = 1);

std::string records_to_csv(const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> records_from_csv(const std::string& text);
std::string risk_to_csv(const RiskTable& table);
std::string curve_to_csv(const std::vector<CurvePoint>& curve);
std::string manifest_json(const BenchmarkConfig& config, std::size_t packing_size);

}  // namespace ncvlab

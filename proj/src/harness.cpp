#include "ncvlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ncvlab/errors.hpp"

namespace ncvlab {

const char* to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::GdRestarts: return "gd_restarts";
    case OptimizerKind::PerturbedGd: return "perturbed_gd";
    case OptimizerKind::RandomSearch: return "random_search";
    default: return "lattice_sweep";
  }
}

OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "gd_restarts") return OptimizerKind::GdRestarts;
  if (s == "perturbed_gd") return OptimizerKind::PerturbedGd;
  if (s == "random_search") return OptimizerKind::RandomSearch;
  if (s == "lattice_sweep") return OptimizerKind::LatticeSweep;
  throw DomainError("unknown optimizer '" + s + "'");
}

void OptimizerSpec::validate() const {
  if (!(step_size > 0.0)) throw DomainError("step_size must be positive");
  if (restarts < 1) throw DomainError("restarts must be >= 1");
  if (!(perturbation > 0.0)) throw DomainError("perturbation must be positive");
  if (samples_per_estimate < 1) {
    throw DomainError("samples_per_estimate must be >= 1");
  }
}

void BenchmarkConfig::validate() const {
  params.validate();
  oracle.validate(params.d);
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (top_k < 1) throw DomainError("top_k must be >= 1");
  for (const auto& o : optimizers) o.validate();
}

double lemma2_tolerance(const HardnessParams& params, std::optional<double> psi) {
  if (psi) return *psi / 9.0;
  return params.delta * params.c / 2.0 / 9.0;
}

double per_point_tolerance(const HardnessParams& params) {
  return 2.0 * params.delta * params.c /
         static_cast<double>(params.corners()) / 9.0;
}

namespace {

std::vector<double> clamp_to_domain(std::vector<double> x) {
  for (double& v : x) v = std::clamp(v, -kDomainHalfWidth, kDomainHalfWidth);
  return x;
}

std::vector<double> random_box_point(std::uint32_t d, CounterRng& rng) {
  std::vector<double> x(d);
  for (double& v : x) {
    v = (2.0 * rng.next_unit() - 1.0) * kDomainHalfWidth;
  }
  return x;
}

std::vector<double> random_candidate_point(std::uint32_t d, CounterRng& rng) {
  const std::uint64_t n = corner_count(d);
  const std::uint64_t pick = rng.next_below(2 * n);
  return lattice_point(d, pick / 2, pick % 2 == 0 ? 1 : 2);
}

bool all_zero(const std::vector<double>& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

void step_in_place(std::vector<double>& x, const std::vector<double>& grad,
                   double step) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step * grad[i];
  x = clamp_to_domain(std::move(x));
}

// Constant-step subgradient descent. On a zero subgradient there is no
// first-order signal (plateau or exact stationary point), so the iterate
// restarts at a random candidate-lattice point; repeated visits to the same
// center are what lets the reconstruction average out the coin noise.
void drive_sgd(const OptimizerSpec& spec, OracleHandle& h, CounterRng& rng) {
  std::vector<double> x = random_candidate_point(h.dimension(), rng);
  while (h.remaining() > 0) {
    const OracleAnswer a = h.query(x);
    if (all_zero(a.v_hat)) {
      x = random_candidate_point(h.dimension(), rng);
    } else {
      step_in_place(x, a.v_hat, spec.step_size);
    }
  }
}

void drive_gd_restarts(const OptimizerSpec& spec, OracleHandle& h,
                       CounterRng& rng) {
  const std::uint64_t total = h.remaining();
  const std::uint64_t slot =
      std::max<std::uint64_t>(1, total / static_cast<std::uint64_t>(spec.restarts));
  std::vector<double> x = random_box_point(h.dimension(), rng);
  std::uint64_t used = 0;
  while (h.remaining() > 0) {
    const OracleAnswer a = h.query(x);
    if (!all_zero(a.v_hat)) step_in_place(x, a.v_hat, spec.step_size);
    if (++used % slot == 0) x = random_box_point(h.dimension(), rng);
  }
}

void drive_perturbed_gd(const OptimizerSpec& spec, OracleHandle& h,
                        CounterRng& rng) {
  std::vector<double> x = random_box_point(h.dimension(), rng);
  while (h.remaining() > 0) {
    const OracleAnswer a = h.query(x);
    if (all_zero(a.v_hat)) {
      for (double& v : x) {
        v += (2.0 * rng.next_unit() - 1.0) * spec.perturbation;
      }
      x = clamp_to_domain(std::move(x));
    } else {
      step_in_place(x, a.v_hat, spec.step_size);
    }
  }
}

void drive_random_search(const OptimizerSpec& spec, OracleHandle& h,
                         CounterRng& rng) {
  while (h.remaining() > 0) {
    const std::vector<double> x = random_candidate_point(h.dimension(), rng);
    for (int s = 0; s < spec.samples_per_estimate && h.remaining() > 0; ++s) {
      h.query(x);
    }
  }
}

void drive_lattice_sweep(const OptimizerSpec& spec, OracleHandle& h,
                         CounterRng&) {
  const std::uint32_t d = h.dimension();
  const std::uint64_t n = corner_count(d);
  std::uint64_t idx = 0;
  while (h.remaining() > 0) {
    const std::vector<double> x =
        lattice_point(d, idx / 2, idx % 2 == 0 ? 1 : 2);
    for (int s = 0; s < spec.samples_per_estimate && h.remaining() > 0; ++s) {
      h.query(x);
    }
    idx = (idx + 1) % (2 * n);
  }
}

void run_optimizer(const OptimizerSpec& spec, OracleHandle& h, CounterRng& rng) {
  switch (spec.kind) {
    case OptimizerKind::Sgd: drive_sgd(spec, h, rng); break;
    case OptimizerKind::GdRestarts: drive_gd_restarts(spec, h, rng); break;
    case OptimizerKind::PerturbedGd: drive_perturbed_gd(spec, h, rng); break;
    case OptimizerKind::RandomSearch: drive_random_search(spec, h, rng); break;
    case OptimizerKind::LatticeSweep: drive_lattice_sweep(spec, h, rng); break;
  }
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

}  // namespace

ReconstructionSet reconstruct_set(const Transcript& transcript,
                                  const HardnessParams& params,
                                  ReconstructPolicy policy, int top_k) {
  const std::uint32_t d = params.d;
  const double c = params.c;
  if (policy == ReconstructPolicy::SnapBest) {
    const std::uint64_t n = corner_count(d);
    // Mean observed g_hat within L1 radius c of each candidate center.
    std::vector<double> sum(2 * n, 0.0);
    std::vector<std::uint64_t> count(2 * n, 0);
    for (std::size_t t = 0; t < transcript.rounds(); ++t) {
      const auto r = transcript.algo_round(t);
      for (int family : {1, 2}) {
        std::uint64_t rank = 0;
        double dist = 0.0;
        for (std::uint32_t i = 0; i < d; ++i) {
          if (r.x[i] > 0.0) rank |= std::uint64_t{1} << i;
          dist += std::abs(r.x[i] -
                           lattice_coordinate(r.x[i] > 0.0 ? 1 : 0, family));
        }
        if (dist <= c) {
          const std::size_t slot = 2 * rank + (family == 1 ? 0 : 1);
          sum[slot] += r.g_hat;
          count[slot] += 1;
        }
      }
    }
    std::vector<int> picks(n, 1);  // deep default for unvisited corners
    for (std::uint64_t z = 0; z < n; ++z) {
      const bool has1 = count[2 * z] > 0;
      const bool has2 = count[2 * z + 1] > 0;
      if (!has1 && !has2) continue;
      const double e1 = has1 ? sum[2 * z] / static_cast<double>(count[2 * z])
                             : std::numeric_limits<double>::infinity();
      const double e2 = has2 ? sum[2 * z + 1] / static_cast<double>(count[2 * z + 1])
                             : std::numeric_limits<double>::infinity();
      picks[z] = e2 < e1 ? 2 : 1;
    }
    return complete_reconstruction(d, picks);
  }

  // VisitedTopK: per-point mean over repeat queries at identical coordinates,
  // then the k best after separation filtering.
  std::map<std::vector<double>, std::pair<double, std::uint64_t>> stats;
  for (std::size_t t = 0; t < transcript.rounds(); ++t) {
    const auto r = transcript.algo_round(t);
    auto& s = stats[r.x];
    s.first += r.g_hat;
    s.second += 1;
  }
  std::vector<std::pair<double, std::vector<double>>> ranked;
  ranked.reserve(stats.size());
  for (const auto& [point, s] : stats) {
    ranked.emplace_back(s.first / static_cast<double>(s.second), point);
  }
  std::sort(ranked.begin(), ranked.end());
  ReconstructionSet out;
  for (const auto& [mean, point] : ranked) {
    if (static_cast<int>(out.points.size()) >= top_k) break;
    bool separated = true;
    for (const auto& kept : out.points) {
      if (!(l1(kept, point) > c)) {
        separated = false;
        break;
      }
    }
    if (separated) out.points.push_back(point);
  }
  return out;
}

BenchmarkRecord run_trial(const OptimizerSpec& spec, const HardInstance& instance,
                          const std::vector<HardInstance>& candidates,
                          const BenchmarkConfig& config, std::size_t alpha_idx,
                          int trial, std::optional<double> psi) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t trial_key =
      derive_key(config.seed, stream::kTrial,
                 (static_cast<std::uint64_t>(alpha_idx) << 32) ^
                     static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial)));

  OracleConfig ocfg = config.oracle;
  ocfg.seed = derive_key(trial_key, stream::kOracle);
  Transcript transcript(config.budget);
  OracleHandle handle(instance, ocfg, transcript);
  CounterRng opt_rng(trial_key, stream::kOptimizer);
  run_optimizer(spec, handle, opt_rng);

  const ReconstructionSet s =
      reconstruct_set(transcript, config.params, config.policy, config.top_k);
  BenchmarkRecord rec;
  rec.optimizer = spec.name();
  rec.alpha_idx = alpha_idx;
  rec.trial = trial;
  rec.seed = trial_key;
  rec.budget = config.budget;
  rec.epsilon = error_eT(instance, s);
  rec.success = !s.empty() && rec.epsilon <= config.tolerance;

  // Uniqueness of a threshold passer holds only for complete reconstructions.
  // The estimator's random fallback still counts as an identification attempt;
  // its occasional correct guess is the 1/|V| no-signal floor.
  if (psi && !candidates.empty() && config.policy == ReconstructPolicy::SnapBest) {
    CounterRng fallback_rng(trial_key, stream::kFallback);
    const IdentificationResult id = hypothesis_test(s, candidates, *psi, fallback_rng);
    rec.matched = id.matched;
    rec.identified = candidates[id.chosen].alpha() == instance.alpha();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

namespace {

struct Aggregate {
  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    n += 1;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - m * m);
    return std::sqrt(var / static_cast<double>(n));
  }
};

}  // namespace

std::vector<CurvePoint> empirical_success_curve(const OptimizerSpec& spec,
                                                const BenchmarkConfig& config,
                                                const PackingSet& packing,
                                                const std::vector<std::uint64_t>& T_grid) {
  config.validate();
  if (packing.members.empty()) throw DomainError("empty packing");
  for (std::size_t i = 1; i < T_grid.size(); ++i) {
    if (T_grid[i] <= T_grid[i - 1]) throw DomainError("T_grid must be ascending");
  }
  std::vector<CurvePoint> out;
  for (const std::uint64_t T : T_grid) {
    BenchmarkConfig cfg = config;
    cfg.budget = T;
    Aggregate eps_all;
    std::map<std::size_t, Aggregate> eps_by_alpha;
    std::uint64_t successes = 0;
    for (int trial = 0; trial < config.trials; ++trial) {
      const std::size_t alpha_idx = trial % packing.members.size();
      // instance_id = trial: the same theta draw faces every budget in the
      // grid, so curves are coupled across T.
      const HardInstance g =
          HardInstance::generate(config.params, packing.members[alpha_idx],
                                 config.seed, static_cast<std::uint64_t>(trial));
      const BenchmarkRecord r =
          run_trial(spec, g, {}, cfg, alpha_idx, trial, std::nullopt);
      eps_all.add(r.epsilon);
      eps_by_alpha[alpha_idx].add(r.epsilon);
      successes += r.success ? 1 : 0;
    }
    CurvePoint p;
    p.T = T;
    p.success_rate = static_cast<double>(successes) / config.trials;
    p.mean_eps = eps_all.mean();
    p.se_eps = eps_all.se();
    for (const auto& [idx, agg] : eps_by_alpha) {
      p.worst_alpha_mean_eps = std::max(p.worst_alpha_mean_eps, agg.mean());
    }
    out.push_back(p);
  }
  return out;
}

RequiredT required_budget(const OptimizerSpec& spec, const BenchmarkConfig& base,
                          const PackingSet& packing, double target_rate,
                          std::uint64_t T_start, std::uint64_t T_cap,
                          double grid_factor) {
  if (!(grid_factor > 1.0)) throw DomainError("grid_factor must exceed 1");
  std::uint64_t T = std::max<std::uint64_t>(1, T_start);
  while (T <= T_cap) {
    const auto curve = empirical_success_curve(spec, base, packing, {T});
    if (curve[0].success_rate >= target_rate) {
      return {true, T, curve[0].success_rate};
    }
    const auto next = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(T) * grid_factor));
    T = std::max(next, T + 1);
  }
  return {false, 0, 0.0};
}

RiskTable minimax_risk_estimate(const std::vector<OptimizerSpec>& optimizers,
                                const PackingSet& packing,
                                const HardnessParams& params,
                                const OracleConfig& oracle, std::uint64_t T,
                                int trials, std::uint64_t seed,
                                ReconstructPolicy policy, int top_k) {
  if (trials < 10) throw DomainError("minimax_risk_estimate needs trials >= 10");
  if (optimizers.empty()) throw DomainError("no optimizers given");
  BenchmarkConfig cfg;
  cfg.params = params;
  cfg.oracle = oracle;
  cfg.budget = T;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.tolerance = lemma2_tolerance(params);
  cfg.policy = policy;
  cfg.top_k = top_k;

  RiskTable table;
  table.minimax_value = std::numeric_limits<double>::infinity();
  for (const auto& spec : optimizers) {
    std::vector<RiskRow> rows;
    double worst = -1.0;
    std::size_t worst_idx = 0;
    for (std::size_t a = 0; a < packing.members.size(); ++a) {
      Aggregate agg;
      for (int trial = 0; trial < trials; ++trial) {
        const HardInstance g = HardInstance::generate(
            params, packing.members[a], seed,
            (static_cast<std::uint64_t>(a) << 32) ^
                static_cast<std::uint64_t>(trial));
        const BenchmarkRecord r = run_trial(spec, g, {}, cfg, a, trial, std::nullopt);
        agg.add(r.epsilon);
      }
      RiskRow row;
      row.optimizer = spec.name();
      row.alpha_idx = a;
      row.trials = trials;
      row.mean_eps = agg.mean();
      row.stderr_eps = agg.se();
      if (row.mean_eps > worst) {
        worst = row.mean_eps;
        worst_idx = a;
      }
      rows.push_back(row);
    }
    rows[worst_idx].worst_case = true;
    if (worst < table.minimax_value) {
      table.minimax_value = worst;
      table.best_optimizer = spec.name();
    }
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  return table;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
  std::string out = "optimizer,alpha_idx,trial,seed,T,epsilon,success,identified,matched\n";
  for (const auto& r : records) {
    out += r.optimizer;
    out += ',' + std::to_string(r.alpha_idx);
    out += ',' + std::to_string(r.trial);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.budget);
    out += ',' + fmt(r.epsilon);
    out += r.success ? ",1" : ",0";
    out += r.identified ? ",1" : ",0";
    out += r.matched ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::vector<BenchmarkRecord> records_from_csv(const std::string& text) {
  std::vector<BenchmarkRecord> out;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    BenchmarkRecord r;
    std::getline(ls, r.optimizer, ',');
    std::getline(ls, field, ',');
    r.alpha_idx = std::stoull(field);
    std::getline(ls, field, ',');
    r.trial = std::stoi(field);
    std::getline(ls, field, ',');
    r.seed = std::stoull(field);
    std::getline(ls, field, ',');
    r.budget = std::stoull(field);
    std::getline(ls, field, ',');
    r.epsilon = std::stod(field);
    std::getline(ls, field, ',');
    r.success = field == "1";
    std::getline(ls, field, ',');
    r.identified = field == "1";
    std::getline(ls, field, ',');
    r.matched = field == "1";
    out.push_back(std::move(r));
  }
  return out;
}

std::string risk_to_csv(const RiskTable& table) {
  std::string out = "optimizer,alpha_idx,trials,mean_eps,stderr,worst_case_flag\n";
  for (const auto& r : table.rows) {
    out += r.optimizer;
    out += ',' + std::to_string(r.alpha_idx);
    out += ',' + std::to_string(r.trials);
    out += ',' + fmt(r.mean_eps);
    out += ',' + fmt(r.stderr_eps);
    out += r.worst_case ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "T,success_rate,mean_eps,se_eps,worst_alpha_mean_eps\n";
  for (const auto& p : curve) {
    out += std::to_string(p.T);
    out += ',' + fmt(p.success_rate);
    out += ',' + fmt(p.mean_eps);
    out += ',' + fmt(p.se_eps);
    out += ',' + fmt(p.worst_alpha_mean_eps);
    out += '\n';
  }
  return out;
}

std::string manifest_json(const BenchmarkConfig& config, std::size_t packing_size) {
  nlohmann::ordered_json j;
  j["format"] = "ncvlab-run/1";
  j["d"] = config.params.d;
  j["delta"] = config.params.delta;
  j["c"] = config.params.c;
  j["coupling"] = to_string(config.params.coupling);
  j["ell"] = config.oracle.ell;
  j["norm"] = to_string(config.oracle.norm);
  j["T"] = config.budget;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  j["tolerance"] = config.tolerance;
  j["policy"] =
      config.policy == ReconstructPolicy::SnapBest ? "snap_best" : "visited_topk";
  j["top_k"] = config.top_k;
  auto opts = nlohmann::ordered_json::array();
  for (const auto& o : config.optimizers) {
    nlohmann::ordered_json oj;
    oj["kind"] = o.name();
    oj["step_size"] = o.step_size;
    oj["restarts"] = o.restarts;
    oj["perturbation"] = o.perturbation;
    oj["samples_per_estimate"] = o.samples_per_estimate;
    opts.push_back(std::move(oj));
  }
  j["optimizers"] = std::move(opts);
  j["packing_size"] = packing_size;
  return j.dump(2);
}

}  // namespace ncvlab

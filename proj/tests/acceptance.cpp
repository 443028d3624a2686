// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. argv[1] is the CLI binary path (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncvlab/bounds.hpp"
#include "ncvlab/discrepancy.hpp"
#include "ncvlab/harness.hpp"
#include "ncvlab/identify.hpp"
#include "ncvlab/oracle.hpp"
#include "support.hpp"

using namespace ncvlab;
using namespace ncvlab::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

struct Check {
  Outcome& out;
  void require(bool ok, const std::string& why) {
    if (!ok && out.pass) {
      out.pass = false;
      out.note = why;
    }
  }
};

double binom_se(double rate, double n) {
  return n > 0 ? std::sqrt(std::max(0.0, rate * (1.0 - rate)) / n) : 0.0;
}

// ---- 1. oracle unbiasedness ------------------------------------------------

Outcome criterion_unbiasedness() {
  Outcome out;
  Check chk{out};
  double worst_sigma = 0.0;
  const std::uint32_t dims[5] = {1, 2, 3, 1, 2};
  for (int inst = 0; inst < 5; ++inst) {
    const std::uint32_t d = dims[inst];
    HardnessParams p{d, 0.1, 0.125, Coupling::Signed};
    const auto packing = build_packing(d, 100 + inst, 2);
    const auto g = HardInstance::generate(p, packing.members[inst % 2], 200 + inst,
                                          inst);
    const std::uint32_t n = static_cast<std::uint32_t>(p.corners());
    const std::uint32_t ells[3] = {1, n, std::max(1u, n / 2)};
    CounterRng rng(300 + inst);
    for (int pt = 0; pt < 5; ++pt) {
      // half the points land inside a bump, half roam the box
      std::vector<double> x;
      if (pt % 2 == 0) {
        x = lattice_point(d, rng.next_below(n), rng.next_bernoulli(0.5) ? 1 : 2);
        for (auto& v : x) v += (rng.next_unit() - 0.5) * 0.1;
      } else {
        x = random_point(d, rng, 0.9);
      }
      OracleConfig cfg{ells[pt % 3], NormOrder::LInf,
                       derive_key(400 + inst, 0, pt)};
      const auto rep = unbiasedness_check(g, x, 100000, cfg);
      const double gap = std::abs(rep.empirical_mean - rep.expected);
      chk.require(gap <= 3.0 * rep.standard_error,
                  "MC mean off by " + std::to_string(gap / rep.standard_error) +
                      " SE at d=" + std::to_string(d));
      chk.require(rep.v_norm_max <= 1.0, "||v_hat||_inf above 1");
      worst_sigma = std::max(worst_sigma, gap / std::max(rep.standard_error, 1e-300));
    }
  }
  // exact enumeration equality at d <= 2
  double worst_exact = 0.0;
  for (std::uint32_t d : {1u, 2u}) {
    HardnessParams p{d, 0.2, 0.125, Coupling::Signed};
    const auto packing = build_packing(d, 500 + d, 2);
    const auto g = HardInstance::generate(p, packing.members[0], 600 + d, 0);
    CounterRng rng(700 + d);
    for (std::uint32_t ell : {1u, static_cast<std::uint32_t>(p.corners())}) {
      for (int pt = 0; pt < 5; ++pt) {
        const auto x = random_point(d, rng, 0.9);
        const double err = std::abs(exact_expected_g_hat(g, x, ell) - g.evaluate(x));
        worst_exact = std::max(worst_exact, err);
        chk.require(err < 1e-12, "exact enumeration gap " + std::to_string(err));
      }
    }
  }
  if (out.pass) {
    std::ostringstream os;
    os.precision(3);
    os << "max |mean-g|/SE=" << worst_sigma << ", max enum gap=" << worst_exact;
    out.note = os.str();
  }
  return out;
}

// ---- 2. subgradient correctness ---------------------------------------------

Outcome criterion_subgradient() {
  Outcome out;
  Check chk{out};
  double worst = 0.0;
  for (std::uint32_t d : {1u, 2u, 4u}) {
    HardnessParams p{d, 0.1, 0.125, Coupling::Signed};
    const auto packing = build_packing(d, 800 + d, 2);
    const auto g = HardInstance::generate(p, packing.members[0], 900 + d, 0);
    CounterRng rng(1000 + d);
    int accepted = 0;
    while (accepted < 1000) {
      auto x = random_point(d, rng, 0.8);
      if (rng.next_bernoulli(0.5)) {
        x = lattice_point(d, rng.next_below(p.corners()),
                          rng.next_bernoulli(0.5) ? 1 : 2);
        for (auto& v : x) v += (rng.next_unit() - 0.5) * 0.15;
      }
      if (near_kink(g, x)) continue;
      ++accepted;
      const auto grad = g.subgradient(x);
      const auto fd = fd_gradient(g, x);
      for (std::uint32_t i = 0; i < d; ++i) {
        worst = std::max(worst, std::abs(grad[i] - fd[i]));
      }
    }
  }
  chk.require(worst < 1e-6, "finite-difference gap " + std::to_string(worst));
  if (out.pass) out.note = "max FD gap=" + std::to_string(worst);
  return out;
}

// ---- 3. packing validity ------------------------------------------------------

Outcome criterion_packing() {
  Outcome out;
  Check chk{out};
  const std::size_t wanted[4] = {2, 2, 3, 5};
  std::ostringstream sizes;
  for (std::uint32_t d = 1; d <= 4; ++d) {
    const auto p = build_packing(d, 4242 + d);
    const auto v = verify_packing(p);
    chk.require(v.ok, "verify failed at d=" + std::to_string(d) + ": " + v.reason);
    chk.require(p.members.size() >= wanted[d - 1],
                "size " + std::to_string(p.members.size()) + " below target at d=" +
                    std::to_string(d));
    sizes << (d > 1 ? "," : "") << p.members.size();
  }
  if (out.pass) out.note = "sizes " + sizes.str() + " >= 2,2,3,5";
  return out;
}

// ---- 4. psi bound ---------------------------------------------------------------

Outcome criterion_psi() {
  Outcome out;
  Check chk{out};
  for (double delta : {0.05, 0.1, 0.2}) {
    HardnessParams p1{1, delta, 0.125, Coupling::Signed};
    const auto r1 = psi_bruteforce(p1, full_packing(1), 2);
    chk.require(r1.value >= delta * 0.125 / 2.0,
                "psi below delta*c/2 at d=1, delta=" + std::to_string(delta));
    HardnessParams p2{2, delta, 0.125, Coupling::Signed};
    const auto antipodal = make_packing(
        2, {make_alpha({1, 1, 1, 1}), make_alpha({-1, -1, -1, -1})});
    const auto r2 = psi_bruteforce(p2, antipodal, 2);
    chk.require(r2.value >= delta * 0.125 / 2.0,
                "psi below delta*c/2 at d=2, delta=" + std::to_string(delta));
  }
  HardnessParams pin{1, 0.1, 0.125, Coupling::Signed};
  const double pin_value = psi_bruteforce(pin, full_packing(1), 2).value;
  chk.require(std::abs(pin_value - 0.0125) <= 1e-12,
              "psi(d=1, delta=0.1) = " + std::to_string(pin_value));
  if (out.pass) out.note = "psi(d=1,delta=0.1)=0.0125, all >= delta*c/2";
  return out;
}

// ---- 5. lemma 1 uniqueness ------------------------------------------------------

Outcome criterion_lemma1() {
  Outcome out;
  Check chk{out};
  HardnessParams p{2, 0.1, 0.125, Coupling::Signed};
  const auto packing = full_packing(2);
  const double psi = psi_bruteforce(p, packing, 2).value;
  const double scale = p.theta_scale();
  long combos = 0;
  for (std::size_t ai = 0; ai < packing.members.size() && out.pass; ++ai) {
    for (std::size_t bi = ai + 1; bi < packing.members.size() && out.pass; ++bi) {
      for (int ta = 0; ta < 16 && out.pass; ++ta) {
        for (int tb = 0; tb < 16; ++tb) {
          std::vector<double> va(4), vb(4);
          for (int z = 0; z < 4; ++z) {
            va[z] = (ta >> z) & 1 ? scale : 0.0;
            vb[z] = (tb >> z) & 1 ? scale : 0.0;
          }
          const HardInstance ga(p, packing.members[ai],
                                ThetaVector::explicit_values(va, p.delta), 0);
          const HardInstance gb(p, packing.members[bi],
                                ThetaVector::explicit_values(vb, p.delta), 1);
          for (int picks = 0; picks < 16; ++picks) {
            std::vector<int> fam(4);
            for (int z = 0; z < 4; ++z) fam[z] = (picks >> z) & 1 ? 2 : 1;
            const auto res =
                lemma1_check({ga, gb}, complete_reconstruction(2, fam), psi);
            ++combos;
            if (res.count > 1) {
              chk.require(false, "two instances within psi/3 (pair " +
                                     std::to_string(ai) + "," + std::to_string(bi) +
                                     ")");
              break;
            }
          }
        }
      }
    }
  }
  // randomized fuzz over all 16 members with sampled theta
  std::vector<HardInstance> instances;
  for (std::size_t i = 0; i < packing.members.size(); ++i) {
    instances.push_back(HardInstance::generate(p, packing.members[i], 1234, i));
  }
  CounterRng rng(555);
  for (int iter = 0; iter < 10000 && out.pass; ++iter) {
    std::vector<int> fam(4);
    for (auto& f : fam) f = rng.next_bernoulli(0.5) ? 1 : 2;
    const auto res =
        lemma1_check(instances, complete_reconstruction(2, fam), psi);
    chk.require(res.count <= 1, "fuzz found two instances within psi/3");
  }
  if (out.pass) {
    out.note = std::to_string(combos) + " exhaustive combos + 10000 fuzz sets";
  }
  return out;
}

// ---- 6. lemma 2 chain ------------------------------------------------------------

Outcome criterion_lemma2() {
  Outcome out;
  Check chk{out};
  HardnessParams p{2, 0.2, 0.125, Coupling::Signed};
  const auto packing = make_packing(
      2, {make_alpha({1, 1, 1, 1}), make_alpha({-1, -1, -1, -1})});
  const double psi = psi_bruteforce(p, packing, 2).value;

  BenchmarkConfig cfg;
  cfg.params = p;
  cfg.oracle.ell = 4;
  cfg.budget = 1600;
  cfg.trials = 1;
  cfg.seed = 20260808;
  cfg.tolerance = psi / 9.0;
  cfg.policy = ReconstructPolicy::SnapBest;
  OptimizerSpec sweep{OptimizerKind::LatticeSweep};
  sweep.samples_per_estimate = 200;

  int qualifying = 0, misidentified = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t truth = trial % 2;
    std::vector<HardInstance> cands;
    for (std::size_t i = 0; i < 2; ++i) {
      cands.push_back(
          HardInstance::generate(p, packing.members[i], 8080, trial * 2 + i));
    }
    const auto rec = run_trial(sweep, cands[truth], cands, cfg, truth, trial, psi);
    if (rec.epsilon <= psi / 9.0) {
      ++qualifying;
      if (!rec.identified) ++misidentified;
    }
  }
  chk.require(qualifying >= 30, "only " + std::to_string(qualifying) +
                                    " of 500 trials reached eps <= psi/9");
  const double rate =
      qualifying ? static_cast<double>(misidentified) / qualifying : 0.0;
  const double se = binom_se(rate, qualifying);
  chk.require(rate <= 1.0 / 3.0 + 3.0 * se,
              "misidentification rate " + std::to_string(rate));
  if (out.pass) {
    out.note = std::to_string(qualifying) + " qualifying trials, misid rate " +
               std::to_string(rate);
  }
  return out;
}

// ---- 7. KL inequality chain ---------------------------------------------------

Outcome criterion_kl_chain() {
  Outcome out;
  Check chk{out};
  for (int i = 0; i < 50 && out.pass; ++i) {
    const double delta = 0.01 + (0.24 - 0.01) * i / 49.0;
    const double scale = 0.25 - 0.5 * delta;
    for (int j = 0; j < 50; ++j) {
      const double theta0 = scale * j / 50.0;
      const auto r = kl_delta_theta(delta, theta0);
      chk.require(r.value <= r.quad_bound + 1e-12, "kl value above quad bound");
      chk.require(r.quad_bound <= r.sup_form + 1e-12, "quad above sup form");
      chk.require(r.sup_form <= r.sup_bound + 1e-12, "sup form above 2(1+2d)^2");
    }
  }
  if (out.pass) out.note = "50x50 grid, chain holds to 1e-12";
  return out;
}

// ---- 8. exact MI bound ----------------------------------------------------------

Outcome criterion_mi() {
  Outcome out;
  Check chk{out};
  double worst_margin = 1e9;
  for (std::uint32_t d : {1u, 2u}) {
    const auto packing = full_packing(d);
    const auto n = static_cast<std::uint32_t>(std::uint64_t{1} << d);
    for (std::uint32_t ell : {1u, n}) {
      for (double delta : {0.0, 0.1, 0.2}) {
        for (double theta0 : {0.0, 0.05}) {
          const double mi = mi_exact_small(d, ell, delta, theta0, packing);
          const double cap = ell * 2.0 * (1.0 + 2.0 * delta) * (1.0 + 2.0 * delta);
          chk.require(mi <= cap, "MI above the 2 ell (1+2 delta)^2 bound");
          chk.require(mi >= 0.0, "negative MI");
          if (delta == 0.0 && theta0 == 0.0) {
            chk.require(mi == 0.0, "MI nonzero with fair coins");
          }
          worst_margin = std::min(worst_margin, cap - mi);
        }
      }
    }
  }
  if (out.pass) {
    out.note = "MI <= 2 ell (1+2 delta)^2, min slack " + std::to_string(worst_margin);
  }
  return out;
}

// ---- 9. Fano consistency --------------------------------------------------------

Outcome criterion_fano_consistency() {
  Outcome out;
  Check chk{out};
  std::ostringstream note;
  // d=2 with the full-size built packing; the bound is vacuous there (clamped
  // 0), so the inequality reduces to the floor, exercised on real trials.
  // d=5 makes it bite: the T=0 and T=1 bounds are strictly positive.
  struct Setup {
    std::uint32_t d;
    std::vector<std::uint64_t> budgets;
  };
  const std::vector<Setup> setups = {{2, {0, 1, 2, 5, 10}}, {5, {0, 1}}};
  for (const auto& setup : setups) {
    HardnessParams p{setup.d, 0.05, 0.125, Coupling::Signed};
    const auto packing = build_packing(setup.d, 31415);
    std::vector<HardInstance> cands;
    for (std::size_t i = 0; i < packing.members.size(); ++i) {
      cands.push_back(HardInstance::generate(p, packing.members[i], 27182, i));
    }
    for (const std::uint64_t T : setup.budgets) {
      const auto bound = fano_rhs(setup.d, 1, T, p.delta);
      int misid = 0;
      const int trials = 2000;
      CounterRng pick(999 + setup.d);
      for (int trial = 0; trial < trials; ++trial) {
        const std::size_t truth = pick.next_below(cands.size());
        OracleConfig cfg{1, NormOrder::LInf, derive_key(1700 + setup.d, T, trial)};
        Transcript t(T);
        const std::vector<double> x(setup.d, 0.3);
        for (std::uint64_t i = 0; i < T; ++i) query(cands[truth], x, cfg, t);
        misid += ml_alpha_estimator(t, cands, ThetaHypothesis::Known) != truth;
      }
      const double rate = static_cast<double>(misid) / trials;
      const double se = binom_se(rate, trials);
      chk.require(rate >= bound.clamped - 3.0 * se,
                  "ML misid rate " + std::to_string(rate) + " below bound " +
                      std::to_string(bound.clamped) + " at d=" +
                      std::to_string(setup.d) + ", T=" + std::to_string(T));
      if (setup.d == 5 && T == 1) {
        note.precision(3);
        note << "d=5,T=1: rate " << rate << " >= bound " << bound.clamped;
      }
    }
  }
  if (out.pass) {
    out.note = "d=2 bounds vacuous (clamped 0); " + note.str();
  }
  return out;
}

// ---- 10. calculator spot values ---------------------------------------------------

Outcome criterion_spot_values() {
  Outcome out;
  Check chk{out};
  const auto f = fano_rhs(10, 1, 10, 0.1);
  chk.require(std::abs(f.raw - 0.8473) <= 1e-3,
              "fano_rhs(10,1,10,0.1) = " + std::to_string(f.raw));
  const auto c = compare_nonadaptive(std::uint64_t{1} << 20, 10);
  chk.require(c.nonadaptive == 0.25 && c.adaptive == 0.03125,
              "compare_nonadaptive not exact");
  for (std::uint32_t ell : {2u, 8u, 32u}) {
    const auto full = theorem1_T_lower(10, ell, 1e-3);
    const auto half = theorem1_T_lower(10, ell / 2, 1e-3);
    chk.require(half.t_min_exact == 2.0 * full.t_min_exact,
                "halving ell does not exactly double T_min");
  }
  if (out.pass) out.note = "fano=0.8473, compare=(0.25,0.03125), T doubles exactly";
  return out;
}

// ---- 11. exponential-growth signature ---------------------------------------------

Outcome criterion_growth() {
  Outcome out;
  Check chk{out};
  std::ostringstream note;
  for (OptimizerKind kind : {OptimizerKind::RandomSearch, OptimizerKind::Sgd}) {
    OptimizerSpec spec{kind};
    spec.samples_per_estimate = 16;
    std::vector<double> required;
    for (std::uint32_t d = 2; d <= 6; ++d) {
      HardnessParams p{d, 0.2, 0.125, Coupling::Signed};
      const std::size_t target =
          std::min<std::size_t>(default_packing_target(d), 8);
      const auto packing = build_packing(d, 6000 + d, target);
      BenchmarkConfig cfg;
      cfg.params = p;
      cfg.oracle.ell = static_cast<std::uint32_t>(p.corners());
      cfg.trials = 48;
      cfg.seed = 7000 + d;
      cfg.tolerance = per_point_tolerance(p);
      cfg.policy = ReconstructPolicy::VisitedTopK;
      cfg.top_k = 1;
      const std::uint64_t t_start = 2 * p.corners() * 8;
      const std::uint64_t t_cap = p.corners() * 8192;
      const auto req =
          required_budget(spec, cfg, packing, 0.9, t_start, t_cap, 1.25);
      if (!req.found) {
        chk.require(false, std::string(to_string(kind)) +
                               " never reached 0.9 success at d=" +
                               std::to_string(d));
        break;
      }
      required.push_back(static_cast<double>(req.T));
    }
    if (!out.pass) break;
    int good_ratio = 0;
    bool monotone = true;
    note << to_string(kind) << " T*:";
    for (std::size_t i = 0; i < required.size(); ++i) {
      note << (i ? "," : " ") << static_cast<std::uint64_t>(required[i]);
      if (i > 0) {
        monotone = monotone && required[i] > required[i - 1];
        if (required[i] / required[i - 1] >= 1.5) ++good_ratio;
      }
    }
    note << "; ";
    chk.require(monotone, std::string(to_string(kind)) + " required T not monotone");
    chk.require(good_ratio >= 3, std::string(to_string(kind)) + " only " +
                                     std::to_string(good_ratio) +
                                     " of 4 steps with ratio >= 1.5");
  }
  if (out.pass) out.note = note.str();
  return out;
}

// ---- 12. CLI determinism -----------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Outcome criterion_cli_determinism(const std::string& cli) {
  Outcome out;
  Check chk{out};
  if (cli.empty()) {
    out.pass = false;
    out.note = "CLI path not provided";
    return out;
  }
  const fs::path dir = fs::temp_directory_path() / "ncvlab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto sh = [&](const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    chk.require(rc == 0, "command failed: " + cmd);
  };
  const std::string q = "\"" + cli + "\"";
  sh(q + " bench --d 2 --delta 0.2 --T 300 --trials 12 --seed 9 --out-dir " +
     (dir / "r1").string() + " > /dev/null");
  sh(q + " bench --d 2 --delta 0.2 --T 300 --trials 12 --seed 9 --out-dir " +
     (dir / "r2").string() + " > /dev/null");
  chk.require(slurp(dir / "r1" / "records.csv") == slurp(dir / "r2" / "records.csv"),
              "bench records differ across same-seed runs");
  chk.require(!slurp(dir / "r1" / "records.csv").empty(), "bench wrote no records");
  sh(q + " verify-psi --d 1 --delta 0.1 --format csv > " + (dir / "p1.csv").string());
  sh(q + " verify-psi --d 1 --delta 0.1 --format csv > " + (dir / "p2.csv").string());
  chk.require(slurp(dir / "p1.csv") == slurp(dir / "p2.csv"),
              "verify-psi output differs");
  sh(q + " fano --d 10 --ell 1 --T 10 --delta 0.1 --format csv > " +
     (dir / "f1.csv").string());
  sh(q + " fano --d 10 --ell 1 --T 10 --delta 0.1 --format csv > " +
     (dir / "f2.csv").string());
  chk.require(slurp(dir / "f1.csv") == slurp(dir / "f2.csv"), "fano output differs");
  // every subcommand exits 0 on --help
  for (const char* sub :
       {"gen", "eval", "verify-packing", "verify-psi", "verify-kl",
        "verify-lemma1", "fano", "mi", "tbound", "compare", "bench", "report"}) {
    const int rc =
        std::system((q + " " + sub + " --help > /dev/null 2>&1").c_str());
    chk.require(rc == 0, std::string(sub) + " --help did not exit 0");
  }
  if (out.pass) out.note = "bench/verify-psi/fano byte-identical; --help exits 0";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle unbiasedness", criterion_unbiasedness},
      {"subgradient correctness", criterion_subgradient},
      {"packing validity", criterion_packing},
      {"psi bound", criterion_psi},
      {"lemma 1 uniqueness", criterion_lemma1},
      {"lemma 2 chain", criterion_lemma2},
      {"KL inequality chain", criterion_kl_chain},
      {"exact MI bound", criterion_mi},
      {"Fano consistency", criterion_fano_consistency},
      {"calculator spot values", criterion_spot_values},
      {"exponential-growth signature", criterion_growth},
      {"CLI determinism", [&] { return criterion_cli_determinism(cli); }},
  };

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("[%2zu] %s  %-30s (%.1f s)%s%s\n", i + 1,
                out.pass ? "PASS" : "FAIL", criteria[i].name, secs,
                out.note.empty() ? "" : "  -- ", out.note.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES");
  return all_pass ? 0 : 1;
}

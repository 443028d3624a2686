// ncvlab command line: instance generation, verification suites, bound
// curves, benchmarks, and report aggregation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncvlab/bounds.hpp"
#include "ncvlab/discrepancy.hpp"
#include "ncvlab/errors.hpp"
#include "ncvlab/harness.hpp"
#include "ncvlab/identify.hpp"
#include "ncvlab/oracle.hpp"

namespace fs = std::filesystem;
using namespace ncvlab;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NCVLAB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string field;
  while (std::getline(is, field, ',')) {
    out.push_back(std::stod(field));
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

PackingSet packing_for(std::uint32_t d, const std::string& kind,
                       std::uint64_t seed, std::optional<std::size_t> target) {
  if (kind == "full") return full_packing(d);
  return build_packing(d, seed, target);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Format {
  std::string value = "human";
  bool csv() const { return value == "csv"; }
  bool json() const { return value == "json"; }
};

int run(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for first-order query-complexity lower "
               "bounds on a hard non-convex function family"};
  app.require_subcommand(1);
  Format format;
  app.add_option("--format", format.value, "output format")
      ->check(CLI::IsMember({"human", "csv", "json"}))
      ->capture_default_str();

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a hard instance file");
  struct {
    std::uint32_t d = 2;
    double delta = 0.1;
    double c = 0.125;
    std::string coupling = "signed";
    std::uint64_t seed = default_seed();
    std::uint64_t instance_id = 0;
    std::size_t alpha_index = 0;
    std::optional<std::size_t> target_size;
    std::string out;
    std::string packing_out;
  } gen_opts;
  gen->add_option("--d", gen_opts.d, "dimension")->capture_default_str();
  gen->add_option("--delta", gen_opts.delta)->capture_default_str();
  gen->add_option("--c", gen_opts.c)->capture_default_str();
  gen->add_option("--coupling", gen_opts.coupling)
      ->check(CLI::IsMember({"signed", "literal"}))
      ->capture_default_str();
  gen->add_option("--seed", gen_opts.seed)->capture_default_str();
  gen->add_option("--instance-id", gen_opts.instance_id)->capture_default_str();
  gen->add_option("--alpha-index", gen_opts.alpha_index,
                  "packing member parametrizing the instance")
      ->capture_default_str();
  gen->add_option("--target-size", gen_opts.target_size, "packing target size");
  gen->add_option("--out", gen_opts.out, "instance file")->required();
  gen->add_option("--packing-out", gen_opts.packing_out, "also write the packing");

  // ---- eval ---------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "evaluate an instance at a point");
  struct {
    std::string instance;
    std::string x;
    bool grad = false;
  } eval_opts;
  eval->add_option("--instance", eval_opts.instance)->required();
  eval->add_option("--x", eval_opts.x, "comma-separated point")->required();
  eval->add_flag("--grad", eval_opts.grad, "also print the subgradient");

  // ---- verify-packing -------------------------------------------------------
  auto* vpack = app.add_subcommand("verify-packing",
                                   "build or load a packing and verify it");
  struct {
    std::uint32_t d = 3;
    std::uint64_t seed = default_seed();
    std::optional<std::size_t> target_size;
    std::string in;
  } vpack_opts;
  vpack->add_option("--d", vpack_opts.d)->capture_default_str();
  vpack->add_option("--seed", vpack_opts.seed)->capture_default_str();
  vpack->add_option("--target-size", vpack_opts.target_size);
  vpack->add_option("--in", vpack_opts.in, "verify a packing file instead");

  // ---- verify-psi -----------------------------------------------------------
  auto* vpsi = app.add_subcommand(
      "verify-psi",
      "brute-force the minimum discrepancy and check psi >= delta c/2");
  struct {
    std::uint32_t d = 1;
    double delta = 0.1;
    double c = 0.125;
    int steps = 2;
    std::string packing = "full";
    std::uint64_t seed = default_seed();
    std::string witness_out;
  } vpsi_opts;
  vpsi->add_option("--d", vpsi_opts.d)->capture_default_str();
  vpsi->add_option("--delta", vpsi_opts.delta)->capture_default_str();
  vpsi->add_option("--c", vpsi_opts.c)->capture_default_str();
  vpsi->add_option("--steps", vpsi_opts.steps, "theta grid steps")
      ->capture_default_str();
  vpsi->add_option("--packing", vpsi_opts.packing)
      ->check(CLI::IsMember({"full", "build"}))
      ->capture_default_str();
  vpsi->add_option("--seed", vpsi_opts.seed)->capture_default_str();
  vpsi->add_option("--witness-out", vpsi_opts.witness_out, "witness CSV path");

  // ---- verify-kl ------------------------------------------------------------
  auto* vkl = app.add_subcommand("verify-kl",
                                 "check the KL inequality chain on a grid");
  int kl_grid = 50;
  vkl->add_option("--grid", kl_grid)->capture_default_str();

  // ---- verify-lemma1 --------------------------------------------------------
  auto* vl1 = app.add_subcommand(
      "verify-lemma1", "uniqueness: no set approximates two instances at once");
  struct {
    std::uint32_t d = 2;
    double delta = 0.1;
    double c = 0.125;
    std::uint64_t seed = default_seed();
    int fuzz = 10000;
  } vl1_opts;
  vl1->add_option("--d", vl1_opts.d)->check(CLI::Range(1u, 2u))->capture_default_str();
  vl1->add_option("--delta", vl1_opts.delta)->capture_default_str();
  vl1->add_option("--c", vl1_opts.c)->capture_default_str();
  vl1->add_option("--seed", vl1_opts.seed)->capture_default_str();
  vl1->add_option("--fuzz", vl1_opts.fuzz)->capture_default_str();

  // ---- fano -----------------------------------------------------------------
  auto* fano = app.add_subcommand("fano", "packing-identification lower bound");
  struct {
    std::uint32_t d = 10;
    std::uint32_t ell = 1;
    std::uint64_t T = 10;
    double delta = 0.1;
    std::string t_grid;
  } fano_opts;
  fano->add_option("--d", fano_opts.d)->capture_default_str();
  fano->add_option("--ell", fano_opts.ell)->capture_default_str();
  fano->add_option("--T", fano_opts.T)->capture_default_str();
  fano->add_option("--delta", fano_opts.delta)->capture_default_str();
  fano->add_option("--T-grid", fano_opts.t_grid,
                   "comma-separated budgets; emits a bound curve as CSV");

  // ---- mi -------------------------------------------------------------------
  auto* mi = app.add_subcommand("mi", "exact single-round mutual information");
  struct {
    std::uint32_t d = 2;
    std::uint32_t ell = 1;
    double delta = 0.1;
    double theta0 = 0.0;
    std::string packing = "full";
    std::uint64_t seed = default_seed();
  } mi_opts;
  mi->add_option("--d", mi_opts.d)->capture_default_str();
  mi->add_option("--ell", mi_opts.ell)->capture_default_str();
  mi->add_option("--delta", mi_opts.delta)->capture_default_str();
  mi->add_option("--theta0", mi_opts.theta0)->capture_default_str();
  mi->add_option("--packing", mi_opts.packing)
      ->check(CLI::IsMember({"full", "build"}))
      ->capture_default_str();
  mi->add_option("--seed", mi_opts.seed)->capture_default_str();

  // ---- tbound ---------------------------------------------------------------
  auto* tbound = app.add_subcommand("tbound", "query lower bound for target eps");
  struct {
    std::uint32_t d = 10;
    std::uint32_t ell = 1;
    double eps = 1e-3;
  } tb_opts;
  tbound->add_option("--d", tb_opts.d)->capture_default_str();
  tbound->add_option("--ell", tb_opts.ell)->capture_default_str();
  tbound->add_option("--eps", tb_opts.eps)->capture_default_str();

  // ---- compare ---------------------------------------------------------------
  auto* compare = app.add_subcommand("compare",
                                     "adaptive vs non-adaptive accuracy scales");
  struct {
    std::uint64_t T = 1 << 20;
    std::uint32_t d = 10;
  } cmp_opts;
  compare->add_option("--T", cmp_opts.T)->capture_default_str();
  compare->add_option("--d", cmp_opts.d)->capture_default_str();

  // ---- bench ----------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run optimizer trials and write CSV");
  struct {
    std::uint32_t d = 2;
    double delta = 0.2;
    double c = 0.125;
    std::uint32_t ell = 0;  // 0 -> all coins
    std::uint64_t T = 400;
    int trials = 20;
    int trial_begin = 0;
    int trial_end = -1;
    std::string optimizers = "random_search,lattice_sweep";
    std::uint64_t seed = default_seed();
    std::string policy = "topk";
    int top_k = 1;
    std::string tolerance = "per-point";
    std::optional<std::size_t> target_size;
    std::string out_dir;
  } bench_opts;
  bench->add_option("--d", bench_opts.d)->capture_default_str();
  bench->add_option("--delta", bench_opts.delta)->capture_default_str();
  bench->add_option("--c", bench_opts.c)->capture_default_str();
  bench->add_option("--ell", bench_opts.ell, "coins per query (0 = all 2^d)")
      ->capture_default_str();
  bench->add_option("--T", bench_opts.T)->capture_default_str();
  bench->add_option("--trials", bench_opts.trials)->capture_default_str();
  bench->add_option("--trial-begin", bench_opts.trial_begin,
                    "first trial index (sharding)")
      ->capture_default_str();
  bench->add_option("--trial-end", bench_opts.trial_end,
                    "one past the last trial index (-1 = trials)")
      ->capture_default_str();
  bench->add_option("--optimizers", bench_opts.optimizers)->capture_default_str();
  bench->add_option("--seed", bench_opts.seed)->capture_default_str();
  bench->add_option("--policy", bench_opts.policy)
      ->check(CLI::IsMember({"topk", "snap_best"}))
      ->capture_default_str();
  bench->add_option("--top-k", bench_opts.top_k)->capture_default_str();
  bench->add_option("--tolerance", bench_opts.tolerance,
                    "per-point | lemma2 | numeric value")
      ->capture_default_str();
  bench->add_option("--target-size", bench_opts.target_size);
  bench->add_option("--out-dir", bench_opts.out_dir)->required();

  // ---- report ----------------------------------------------------------------
  auto* report = app.add_subcommand("report", "aggregate benchmark run dirs");
  std::vector<std::string> run_dirs;
  std::string report_out;
  report->add_option("--run-dir", run_dirs, "one or more run directories")
      ->required();
  report->add_option("--out", report_out, "summary CSV path");

  // let global flags like --format appear after the subcommand name
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    HardnessParams p{gen_opts.d, gen_opts.delta, gen_opts.c,
                     coupling_from_string(gen_opts.coupling)};
    p.validate();
    const auto packing = build_packing(p.d, gen_opts.seed, gen_opts.target_size);
    if (gen_opts.alpha_index >= packing.members.size()) {
      throw DomainError("alpha-index beyond packing size " +
                        std::to_string(packing.members.size()));
    }
    const auto g = HardInstance::generate(p, packing.members[gen_opts.alpha_index],
                                          gen_opts.seed, gen_opts.instance_id);
    write_file(gen_opts.out, g.to_json() + "\n");
    if (!gen_opts.packing_out.empty()) {
      write_file(gen_opts.packing_out, packing_to_json(packing) + "\n");
    }
    std::cout << "wrote " << gen_opts.out << " (packing size "
              << packing.members.size() << ", min distance "
              << packing.min_distance << ")\n";
    return 0;
  }

  if (eval->parsed()) {
    const auto g = HardInstance::from_json(read_file(eval_opts.instance));
    const auto x = parse_point(eval_opts.x);
    const double value = g.evaluate(x);
    if (format.json()) {
      nlohmann::ordered_json j;
      j["value"] = value;
      if (eval_opts.grad) j["subgradient"] = g.subgradient(x);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << fmt_double(value) << "\n";
      if (eval_opts.grad) {
        const auto grad = g.subgradient(x);
        for (std::size_t i = 0; i < grad.size(); ++i) {
          std::cout << (i ? "," : "") << fmt_double(grad[i]);
        }
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (vpack->parsed()) {
    const PackingSet p = vpack_opts.in.empty()
                             ? build_packing(vpack_opts.d, vpack_opts.seed,
                                             vpack_opts.target_size)
                             : packing_from_json(read_file(vpack_opts.in));
    const auto chk = verify_packing(p);
    std::cout << "size=" << p.members.size() << " min_distance=" << p.min_distance
              << " floor=" << packing_distance_floor(p.d) << " "
              << (chk.ok ? "PASS" : "FAIL") << "\n";
    if (!chk.ok) {
      std::cout << "violation: " << chk.reason << " (members " << chk.first
                << ", " << chk.second << ")\n";
      return 1;
    }
    return 0;
  }

  if (vpsi->parsed()) {
    HardnessParams p{vpsi_opts.d, vpsi_opts.delta, vpsi_opts.c, Coupling::Signed};
    const auto packing =
        packing_for(p.d, vpsi_opts.packing, vpsi_opts.seed, std::nullopt);
    const auto res = psi_bruteforce(p, packing, vpsi_opts.steps);
    if (!vpsi_opts.witness_out.empty()) {
      write_file(vpsi_opts.witness_out, psi_witness_csv(res));
    }
    const double floor = p.delta * p.c / 2.0;
    const bool pass = res.value >= floor - 1e-15;
    if (format.csv()) {
      std::cout << "psi,floor,pass\n"
                << fmt_double(res.value) << ',' << fmt_double(floor) << ','
                << (pass ? 1 : 0) << "\n";
    } else {
      std::cout << "psi=" << fmt_double(res.value) << " floor=delta*c/2="
                << fmt_double(floor) << " " << (pass ? "PASS" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
  }

  if (vkl->parsed()) {
    bool ok = true;
    for (int i = 0; i < kl_grid; ++i) {
      const double delta = 0.01 + (0.24 - 0.01) * i / std::max(1, kl_grid - 1);
      const double scale = 0.25 - 0.5 * delta;
      for (int j = 0; j < kl_grid; ++j) {
        const double theta0 = scale * j / kl_grid;
        const auto r = kl_delta_theta(delta, theta0);
        ok = ok && r.value <= r.quad_bound + 1e-12 &&
             r.quad_bound <= r.sup_form + 1e-12 &&
             r.sup_form <= r.sup_bound + 1e-12;
      }
    }
    std::cout << "kl chain on " << kl_grid << "x" << kl_grid
              << " grid: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
  }

  if (vl1->parsed()) {
    HardnessParams p{vl1_opts.d, vl1_opts.delta, vl1_opts.c, Coupling::Signed};
    const auto packing = full_packing(p.d);
    const double psi = psi_bruteforce(p, packing, 2).value;
    const std::uint64_t n = p.corners();
    const double scale = p.theta_scale();
    bool ok = true;
    // exhaustive: pairs x endpoint thetas x complete sets
    for (std::size_t ai = 0; ai < packing.members.size() && ok; ++ai) {
      for (std::size_t bi = ai + 1; bi < packing.members.size() && ok; ++bi) {
        for (std::uint64_t ta = 0; ta < (1ull << n) && ok; ++ta) {
          for (std::uint64_t tb = 0; tb < (1ull << n) && ok; ++tb) {
            std::vector<double> va(n), vb(n);
            for (std::uint64_t z = 0; z < n; ++z) {
              va[z] = (ta >> z) & 1 ? scale : 0.0;
              vb[z] = (tb >> z) & 1 ? scale : 0.0;
            }
            const HardInstance ga(p, packing.members[ai],
                                  ThetaVector::explicit_values(va, p.delta), 0);
            const HardInstance gb(p, packing.members[bi],
                                  ThetaVector::explicit_values(vb, p.delta), 1);
            for (std::uint64_t picks = 0; picks < (1ull << n); ++picks) {
              std::vector<int> fam(n);
              for (std::uint64_t z = 0; z < n; ++z) {
                fam[z] = (picks >> z) & 1 ? 2 : 1;
              }
              if (lemma1_check({ga, gb}, complete_reconstruction(p.d, fam), psi)
                      .count > 1) {
                ok = false;
                break;
              }
            }
          }
        }
      }
    }
    // randomized fuzz over the whole member set
    CounterRng rng(vl1_opts.seed, 77);
    std::vector<HardInstance> instances;
    for (std::size_t i = 0; i < packing.members.size(); ++i) {
      instances.push_back(
          HardInstance::generate(p, packing.members[i], vl1_opts.seed, i));
    }
    for (int iter = 0; iter < vl1_opts.fuzz && ok; ++iter) {
      std::vector<int> fam(n);
      for (auto& f : fam) f = rng.next_bernoulli(0.5) ? 1 : 2;
      ok = lemma1_check(instances, complete_reconstruction(p.d, fam), psi).count <= 1;
    }
    std::cout << "lemma1 uniqueness (psi=" << fmt_double(psi)
              << "): " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
  }

  if (fano->parsed()) {
    if (!fano_opts.t_grid.empty()) {
      std::cout << "T,raw,clamped,vacuous\n";
      std::istringstream is(fano_opts.t_grid);
      std::string field;
      while (std::getline(is, field, ',')) {
        const auto T = static_cast<std::uint64_t>(std::stoull(field));
        const auto r = fano_rhs(fano_opts.d, fano_opts.ell, T, fano_opts.delta);
        std::cout << T << ',' << fmt_double(r.raw) << ',' << fmt_double(r.clamped)
                  << ',' << (r.vacuous ? 1 : 0) << "\n";
      }
      return 0;
    }
    const auto r =
        fano_rhs(fano_opts.d, fano_opts.ell, fano_opts.T, fano_opts.delta);
    if (format.csv()) {
      std::cout << "raw,clamped,vacuous\n"
                << fmt_double(r.raw) << ',' << fmt_double(r.clamped) << ','
                << (r.vacuous ? 1 : 0) << "\n";
    } else if (format.json()) {
      nlohmann::ordered_json j{{"raw", r.raw},
                               {"clamped", r.clamped},
                               {"vacuous", r.vacuous}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "raw=" << fmt_double(r.raw)
                << " clamped=" << fmt_double(r.clamped)
                << (r.vacuous ? " vacuous" : "") << "\n";
    }
    return 0;
  }

  if (mi->parsed()) {
    const auto packing =
        packing_for(mi_opts.d, mi_opts.packing, mi_opts.seed, std::nullopt);
    const double value = mi_exact_small(mi_opts.d, mi_opts.ell, mi_opts.delta,
                                        mi_opts.theta0, packing);
    const double cap = mi_opts.ell * 2.0 * (1.0 + 2.0 * mi_opts.delta) *
                       (1.0 + 2.0 * mi_opts.delta);
    const bool pass = value <= cap + 1e-12;
    std::cout << "mi=" << fmt_double(value) << " bound=" << fmt_double(cap)
              << " " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  }

  if (tbound->parsed()) {
    const auto b = theorem1_T_lower(tb_opts.d, tb_opts.ell, tb_opts.eps);
    std::cout << "T_min=" << fmt_double(b.t_min_exact)
              << " T_order=" << fmt_double(b.t_order) << "\n";
    return 0;
  }

  if (compare->parsed()) {
    const auto r = compare_nonadaptive(cmp_opts.T, cmp_opts.d);
    std::cout << "nonadaptive=" << fmt_double(r.nonadaptive)
              << " adaptive=" << fmt_double(r.adaptive) << "\n";
    return 0;
  }

  if (bench->parsed()) {
    BenchmarkConfig cfg;
    cfg.params = HardnessParams{bench_opts.d, bench_opts.delta, bench_opts.c,
                                Coupling::Signed};
    cfg.oracle.ell = bench_opts.ell == 0
                         ? static_cast<std::uint32_t>(cfg.params.corners())
                         : bench_opts.ell;
    cfg.budget = bench_opts.T;
    cfg.trials = bench_opts.trials;
    cfg.seed = bench_opts.seed;
    cfg.policy = bench_opts.policy == "snap_best" ? ReconstructPolicy::SnapBest
                                                  : ReconstructPolicy::VisitedTopK;
    cfg.top_k = bench_opts.top_k;
    if (bench_opts.tolerance == "per-point") {
      cfg.tolerance = per_point_tolerance(cfg.params);
    } else if (bench_opts.tolerance == "lemma2") {
      cfg.tolerance = lemma2_tolerance(cfg.params);
    } else {
      cfg.tolerance = std::stod(bench_opts.tolerance);
    }
    std::istringstream names(bench_opts.optimizers);
    std::string name;
    while (std::getline(names, name, ',')) {
      OptimizerSpec spec;
      spec.kind = optimizer_kind_from_string(name);
      cfg.optimizers.push_back(spec);
    }
    cfg.validate();
    const auto packing =
        build_packing(cfg.params.d, cfg.seed, bench_opts.target_size);

    const int begin = bench_opts.trial_begin;
    const int end = bench_opts.trial_end < 0 ? cfg.trials : bench_opts.trial_end;
    std::vector<BenchmarkRecord> records;
    for (const auto& spec : cfg.optimizers) {
      for (int trial = begin; trial < end; ++trial) {
        const std::size_t alpha_idx = trial % packing.members.size();
        const auto g = HardInstance::generate(
            cfg.params, packing.members[alpha_idx], cfg.seed, trial);
        records.push_back(
            run_trial(spec, g, {}, cfg, alpha_idx, trial, std::nullopt));
      }
    }
    fs::create_directories(bench_opts.out_dir);
    write_file(fs::path(bench_opts.out_dir) / "records.csv",
               records_to_csv(records));
    write_file(fs::path(bench_opts.out_dir) / "manifest.json",
               manifest_json(cfg, packing.members.size()) + "\n");
    std::cout << "wrote " << records.size() << " records to "
              << bench_opts.out_dir << "\n";
    return 0;
  }

  if (report->parsed()) {
    struct Key {
      std::string optimizer;
      std::uint64_t T;
      bool operator<(const Key& o) const {
        return optimizer != o.optimizer ? optimizer < o.optimizer : T < o.T;
      }
    };
    std::map<Key, std::vector<BenchmarkRecord>> groups;
    std::uint32_t d = 0, ell = 0;
    double delta = 0.0;
    for (const auto& dir : run_dirs) {
      const fs::path manifest_path = fs::path(dir) / "manifest.json";
      if (!fs::exists(manifest_path)) {
        throw MissingManifestError("no manifest.json in " + dir);
      }
      const auto manifest = nlohmann::json::parse(read_file(manifest_path));
      d = manifest.at("d").get<std::uint32_t>();
      ell = manifest.at("ell").get<std::uint32_t>();
      delta = manifest.at("delta").get<double>();
      const auto records =
          records_from_csv(read_file(fs::path(dir) / "records.csv"));
      for (const auto& r : records) {
        groups[{r.optimizer, r.budget}].push_back(r);
      }
    }
    std::ostringstream csv;
    csv << "optimizer,T,n,mean_eps,success_rate,identified_rate,fano_raw,"
           "fano_clamped,tbound_Tmin\n";
    for (auto& [key, rows] : groups) {
      std::sort(rows.begin(), rows.end(),
                [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
                  return std::tie(a.alpha_idx, a.trial) <
                         std::tie(b.alpha_idx, b.trial);
                });
      double eps_sum = 0.0;
      std::uint64_t success = 0, identified = 0;
      for (const auto& r : rows) {
        eps_sum += r.epsilon;
        success += r.success;
        identified += r.identified;
      }
      const double n = static_cast<double>(rows.size());
      const double mean_eps = eps_sum / n;
      const auto bound = fano_rhs(d, ell, key.T, delta);
      std::string tmin;
      if (mean_eps > 0.0 && mean_eps <= 1.0 / 576.0) {
        tmin = fmt_double(theorem1_T_lower(d, ell, mean_eps).t_min_exact);
      }
      csv << key.optimizer << ',' << key.T << ',' << rows.size() << ','
          << fmt_double(mean_eps) << ',' << fmt_double(success / n) << ','
          << fmt_double(identified / n) << ',' << fmt_double(bound.raw) << ','
          << fmt_double(bound.clamped) << ',' << tmin << "\n";
    }
    const std::string summary = csv.str();
    if (!report_out.empty()) write_file(report_out, summary);
    std::cout << summary;
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ncvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

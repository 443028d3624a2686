#include "ncvlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "json.hpp"
#include "ncvlab/errors.hpp"
#include "ncvlab/rng.hpp"

namespace ncvlab {

const char* to_string(NormOrder p) {
  switch (p) {
    case NormOrder::L1: return "1";
    case NormOrder::L2: return "2";
    default: return "inf";
  }
}

void OracleConfig::validate(std::uint32_t d) const {
  const std::uint64_t n = corner_count(d);
  if (ell < 1 || ell > n) {
    throw DomainError("ell=" + std::to_string(ell) + " outside [1, 2^d=" +
                      std::to_string(n) + "]");
  }
}

std::vector<std::uint8_t> CoinRecord::padded(std::uint64_t corners) const {
  std::vector<std::uint8_t> y(corners, 0);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    y[chosen[i]] = outcomes[i];
  }
  return y;
}

void Transcript::append(TranscriptRound round) {
  if (rounds_.size() >= budget_) {
    throw BudgetExhaustedError("transcript budget T=" + std::to_string(budget_) +
                               " exhausted");
  }
  if (!record_coins_) {
    round.coins = CoinRecord{};
  }
  rounds_.push_back(std::move(round));
}

std::string Transcript::to_jsonl(bool analyst_view) const {
  std::string out;
  for (const auto& r : rounds_) {
    nlohmann::ordered_json j;
    j["t"] = r.answer.round;
    j["x"] = r.x;
    j["g_hat"] = r.answer.g_hat;
    j["v_hat"] = r.answer.v_hat;
    if (analyst_view) {
      if (!record_coins_) {
        throw MissingCoinViewError("transcript was recorded without coin data");
      }
      j["U"] = r.coins.chosen;
      j["X"] = r.coins.outcomes;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

double coin_bias(const HardInstance& g, const CornerIndex& z) {
  if (z.d != g.params().d) {
    throw LengthMismatchError("corner dimension != instance dimension");
  }
  return g.weight_f1(z.rank);
}

namespace {

struct ActiveCorner {
  std::uint64_t rank = 0;
  double dist = 0.0;
};

// Nearest candidate of one family; only it can differ from the plateau c.
ActiveCorner nearest(std::span<const double> x, int family) {
  std::uint64_t rank = 0;
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) rank |= std::uint64_t{1} << i;
    const int bit = x[i] > 0.0 ? 1 : 0;
    dist += std::abs(x[i] - lattice_coordinate(bit, family));
  }
  return {rank, dist};
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

OracleAnswer answer_for_coins(const HardInstance& g, std::span<const double> x,
                              std::span<const std::uint64_t> chosen,
                              std::span<const std::uint8_t> outcomes) {
  const auto& p = g.params();
  if (x.size() != p.d) {
    throw LengthMismatchError("query point dimension mismatch");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw NonFiniteError("non-finite query coordinate");
  }
  if (chosen.size() != outcomes.size() || chosen.empty()) {
    throw LengthMismatchError("coin record sizes mismatch");
  }
  const double c = p.c;
  const double inv_ell = 1.0 / static_cast<double>(chosen.size());
  const ActiveCorner a1 = nearest(x, 1);
  const ActiveCorner a2 = nearest(x, 2);
  const double f1_active = std::min(a1.dist, c);
  const double f2_active = std::min(a2.dist, c);

  OracleAnswer ans;
  ans.v_hat.assign(p.d, 0.0);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const std::uint64_t z = chosen[i];
    if (z >= p.corners()) throw LengthMismatchError("chosen corner out of range");
    const double f1z = z == a1.rank ? f1_active : c;
    const double f2z = z == a2.rank ? f2_active : c;
    const bool b = outcomes[i] != 0;
    ans.g_hat += inv_ell * (b ? f1z : f2z);
    if (b && z == a1.rank && a1.dist <= c) {
      for (std::uint32_t k = 0; k < p.d; ++k) {
        const double m = lattice_coordinate(static_cast<int>((z >> k) & 1u), 1);
        ans.v_hat[k] += inv_ell * static_cast<double>(sign_of(x[k] - m));
      }
    } else if (!b && z == a2.rank && a2.dist <= c) {
      for (std::uint32_t k = 0; k < p.d; ++k) {
        const double m = lattice_coordinate(static_cast<int>((z >> k) & 1u), 2);
        ans.v_hat[k] += inv_ell * static_cast<double>(sign_of(x[k] - m));
      }
    }
  }
  return ans;
}

namespace {

// Subset of ell corners without replacement (Floyd), independent of x; drawn
// first, then coins in ascending-rank order, so the round is a pure function
// of (seed, round index).
CoinRecord draw_coins(const HardInstance& g, const OracleConfig& config,
                      std::uint64_t round) {
  const std::uint64_t n = g.params().corners();
  CounterRng rng(config.seed, stream::kOracle, round);
  CoinRecord rec;
  rec.chosen.reserve(config.ell);
  if (config.ell == n) {
    for (std::uint64_t z = 0; z < n; ++z) rec.chosen.push_back(z);
  } else {
    std::unordered_set<std::uint64_t> picked;
    for (std::uint64_t j = n - config.ell; j < n; ++j) {
      const std::uint64_t t = rng.next_below(j + 1);
      if (!picked.insert(t).second) picked.insert(j);
    }
    rec.chosen.assign(picked.begin(), picked.end());
    std::sort(rec.chosen.begin(), rec.chosen.end());
  }
  rec.outcomes.resize(rec.chosen.size());
  for (std::size_t i = 0; i < rec.chosen.size(); ++i) {
    rec.outcomes[i] = rng.next_bernoulli(g.weight_f1(rec.chosen[i])) ? 1 : 0;
  }
  return rec;
}

}  // namespace

OracleAnswer sample_answer(const HardInstance& g, std::span<const double> x,
                           const OracleConfig& config, std::uint64_t round) {
  config.validate(g.params().d);
  const CoinRecord coins = draw_coins(g, config, round);
  OracleAnswer ans = answer_for_coins(g, x, coins.chosen, coins.outcomes);
  ans.round = round;
  return ans;
}

OracleAnswer query(const HardInstance& g, std::span<const double> x,
                   const OracleConfig& config, Transcript& transcript) {
  config.validate(g.params().d);
  if (transcript.remaining() == 0) {
    throw BudgetExhaustedError("oracle budget T=" +
                               std::to_string(transcript.budget()) + " exhausted");
  }
  const std::uint64_t round = transcript.rounds();
  TranscriptRound rec;
  rec.x.assign(x.begin(), x.end());
  rec.coins = draw_coins(g, config, round);
  rec.answer = answer_for_coins(g, x, rec.coins.chosen, rec.coins.outcomes);
  rec.answer.round = round;
  const OracleAnswer ans = rec.answer;
  transcript.append(std::move(rec));
  return ans;
}

namespace {

double norm_of(const std::vector<double>& v, NormOrder p) {
  double acc = 0.0;
  switch (p) {
    case NormOrder::L1:
      for (double x : v) acc += std::abs(x);
      return acc;
    case NormOrder::L2:
      for (double x : v) acc += x * x;
      return std::sqrt(acc);
    default:
      for (double x : v) acc = std::max(acc, std::abs(x));
      return acc;
  }
}

}  // namespace

UnbiasednessReport unbiasedness_check(const HardInstance& g,
                                      std::span<const double> x, int n_samples,
                                      const OracleConfig& config) {
  if (n_samples < 100) {
    throw DomainError("unbiasedness_check needs n_samples >= 100");
  }
  double sum = 0.0, sum_sq = 0.0, vsum = 0.0, vmax = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const OracleAnswer a = sample_answer(g, x, config, static_cast<std::uint64_t>(i));
    sum += a.g_hat;
    sum_sq += a.g_hat * a.g_hat;
    const double vn = norm_of(a.v_hat, config.norm);
    vsum += vn;
    vmax = std::max(vmax, vn);
  }
  UnbiasednessReport r;
  const double n = static_cast<double>(n_samples);
  r.empirical_mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - r.empirical_mean * r.empirical_mean);
  r.standard_error = std::sqrt(var / n);
  r.expected = g.evaluate(x);
  r.pass = std::abs(r.empirical_mean - r.expected) <= 3.0 * r.standard_error;
  r.v_norm_mean = vsum / n;
  r.v_norm_max = vmax;
  return r;
}

}  // namespace ncvlab

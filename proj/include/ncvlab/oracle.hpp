#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ncvlab/instance.hpp"

namespace ncvlab {

enum class NormOrder { L1, L2, LInf };

const char* to_string(NormOrder p);

struct OracleConfig {
  std::uint32_t ell = 1;             // coins revealed per query
  NormOrder norm = NormOrder::LInf;  // norm for the variance certificate
  std::uint64_t seed = 0;

  void validate(std::uint32_t d) const;
};

struct OracleAnswer {
  double g_hat = 0.0;
  std::vector<double> v_hat;
  std::uint64_t round = 0;
};

// Hidden per-round coin data: the ell chosen corner ranks (ascending) and
// their Bernoulli outcomes.
struct CoinRecord {
  std::vector<std::uint64_t> chosen;
  std::vector<std::uint8_t> outcomes;

  // Outcome at chosen ranks, zero elsewhere.
  std::vector<std::uint8_t> padded(std::uint64_t corners) const;
};

struct TranscriptRound {
  std::vector<double> x;
  OracleAnswer answer;
  CoinRecord coins;
};

// Ordered query history with a hard budget. The analyst view exposes coin
// data for verification; the algorithm view never does.
class Transcript {
 public:
  explicit Transcript(std::uint64_t budget, bool record_coins = true)
      : budget_(budget), record_coins_(record_coins) {}

  std::uint64_t budget() const { return budget_; }
  std::size_t rounds() const { return rounds_.size(); }
  std::uint64_t remaining() const { return budget_ - rounds_.size(); }
  bool has_coin_view() const { return record_coins_; }

  const TranscriptRound& round(std::size_t t) const { return rounds_.at(t); }

  struct AlgoRound {
    const std::vector<double>& x;
    double g_hat;
    const std::vector<double>& v_hat;
  };
  AlgoRound algo_round(std::size_t t) const {
    const auto& r = rounds_.at(t);
    return {r.x, r.answer.g_hat, r.answer.v_hat};
  }

  void append(TranscriptRound round);

  // JSON-lines export; the algorithm view omits U and X.
  std::string to_jsonl(bool analyst_view) const;

 private:
  std::uint64_t budget_;
  bool record_coins_;
  std::vector<TranscriptRound> rounds_;
};

// Coin bias of corner z: the f1 weight of the instance (protocol step 2).
double coin_bias(const HardInstance& g, const CornerIndex& z);

// Protocol step 3 for given coins: g_hat = (1/ell) sum over chosen z of
// b_z f1(x) + (1 - b_z) f2(x); v_hat from the matching subgradient pieces.
OracleAnswer answer_for_coins(const HardInstance& g, std::span<const double> x,
                              std::span<const std::uint64_t> chosen,
                              std::span<const std::uint8_t> outcomes);

// One full round keyed by (config.seed, round index): subset draw, coin
// draws, answer. Does not touch a transcript.
OracleAnswer sample_answer(const HardInstance& g, std::span<const double> x,
                           const OracleConfig& config, std::uint64_t round);

// Budgeted round appended to the transcript.
OracleAnswer query(const HardInstance& g, std::span<const double> x,
                   const OracleConfig& config, Transcript& transcript);

struct UnbiasednessReport {
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double expected = 0.0;
  bool pass = false;
  double v_norm_mean = 0.0;  // empirical E[||v_hat||_p], the sigma^2 certificate
  double v_norm_max = 0.0;
};

UnbiasednessReport unbiasedness_check(const HardInstance& g,
                                      std::span<const double> x, int n_samples,
                                      const OracleConfig& config);

// The only surface benchmark optimizers see: queries and their (g_hat, v_hat)
// answers. No alpha, theta, or coin data is reachable through it.
class OracleHandle {
 public:
  OracleHandle(const HardInstance& g, const OracleConfig& config, Transcript& t)
      : g_(g), config_(config), transcript_(t) {
    config_.validate(g.params().d);
  }

  OracleAnswer query(std::span<const double> x) {
    return ncvlab::query(g_, x, config_, transcript_);
  }

  std::uint64_t remaining() const { return transcript_.remaining(); }
  std::uint32_t dimension() const { return g_.params().d; }
  // The function class is public; the secrets are alpha and theta.
  HardnessParams class_params() const { return g_.params(); }

 private:
  const HardInstance& g_;
  OracleConfig config_;
  Transcript& transcript_;
};

}  // namespace ncvlab

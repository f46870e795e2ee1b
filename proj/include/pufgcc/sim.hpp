/**
 * \file sim.hpp
 * \brief Channel model, block-error estimators, and analytic reference values.
 *
 * Every trial draws its randomness from its own generator seeded by
 * stream_seed(seed, trial_index), and trials are reduced in fixed-size blocks
 * in index order, so results do not depend on the worker count.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/codec.hpp"
#include "pufgcc/codes.hpp"

namespace pufgcc {

struct BscSpec {
  double p = 0.0;
  std::uint64_t seed = 0;
};

void validate_probability(double p, const char* what);

/// SplitMix64 finalizer applied to (seed, index); the seed of one trial stream.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Flips each bit independently with probability p (0 <= p <= 0.5).
void bsc_apply_inplace(std::mt19937_64& rng, BitVector& word, double p);
BitVector bsc_apply(std::mt19937_64& rng, const BitVector& word, double p);

struct SimReport {
  std::string code;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string mode;  // "mc" or "is"
  double p = 0.0;
  double p_star = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;   // decoder failure or wrong output (under p_star for "is")
  std::uint64_t wrong_key = 0;  // silent wrong output only
  double p_err = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double relative_error = 0.0;  // "is" only: std error / estimate
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Exact two-sided binomial interval.
std::pair<double, double> clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                          double confidence = 0.95);

/// Per trial: random info word, encode, BSC(p), decode, compare.
SimReport monte_carlo_block_error(const Codec& codec, double p, std::uint64_t trials,
                                  std::uint64_t seed, unsigned workers = 1);

/// Errors drawn from BSC(p_star) and reweighted by the likelihood ratio of
/// their weight; unbiased for the block error rate at p. The interval is the
/// normal approximation from the sample variance.
SimReport importance_sampled_block_error(const Codec& codec, double p, double p_star,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers = 1);

struct InnerOutcome {
  std::size_t codeword = 0;  // codebook index of the ML decision
  std::size_t distance = 0;
  double probability = 0.0;
  std::uint64_t patterns = 0;  // received words leading to this outcome
};

/// Exact ML-decoding statistics of a short code over BSC(p) for the all-zero
/// codeword, by enumerating every received word.
struct InnerOutcomeDistribution {
  double p = 0.0;
  std::size_t n = 0;
  std::vector<InnerOutcome> outcomes;  // sorted by (codeword, distance)
  double erasure = 0.0;
  std::uint64_t erasure_patterns = 0;

  double total() const;
  double probability(std::size_t codeword, std::size_t distance) const;
  double probability_of_codeword(std::size_t codeword) const;
};

/// Refuses codes longer than 20 bits.
InnerOutcomeDistribution inner_outcome_distribution(const Codebook& codebook, double p);

/// Sampled counterpart: decodes `rows` independent BSC(p) corruptions of the
/// all-zero word and counts the outcomes.
struct InnerOutcomeCounts {
  std::uint64_t rows = 0;
  std::vector<std::uint64_t> counts;  // index codeword * (n + 1) + distance
  std::uint64_t erasures = 0;
  std::size_t n = 0;

  std::uint64_t count(std::size_t codeword, std::size_t distance) const {
    return counts.at(codeword * (n + 1) + distance);
  }
};

InnerOutcomeCounts sample_inner_outcomes(const Codebook& codebook, double p, std::uint64_t rows,
                                         std::uint64_t seed);

/// P(X >= t) for X ~ Binomial(n, p), summed in the log domain.
double binomial_upper_tail(std::size_t n, std::size_t t, double p);

/// Block error rate of the BCH(318,174,35) + Rep(7,1,7) concatenation over
/// BSC(p): majority decoding of each repetition block, then bounded-distance
/// decoding of up to 17 errors in the 318 outer symbols.
double baseline_bch_rep_perr(double p);

struct BaselineScheme {
  std::size_t outer_n = 318;
  std::size_t outer_k = 174;
  std::size_t outer_d = 35;
  std::size_t repetition = 7;
  std::size_t length() const { return outer_n * repetition; }
};

}  // namespace pufgcc

#include "pufgcc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "pufgcc/error.hpp"

namespace pufgcc {

namespace {

constexpr std::uint64_t kBlockTrials = 1024;

struct BlockTally {
  std::uint64_t failures = 0;
  std::uint64_t wrong = 0;
  double weight_sum = 0.0;
  double weight_sq_sum = 0.0;
};

BitVector random_bits(std::size_t count, std::mt19937_64& rng) {
  BitVector v(count);
  for (auto& w : v.mutable_words()) w = rng();
  if (count % 64 != 0) v.mutable_words().back() &= (std::uint64_t{1} << (count % 64)) - 1;
  return v;
}

// Runs trial(rng, tally) for every trial index, split into fixed blocks that
// workers claim dynamically; block tallies are combined in block order.
template <typename Trial>
BlockTally run_blocks(std::uint64_t trials, std::uint64_t seed, unsigned workers, Trial trial) {
  const std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<BlockTally> tallies(blocks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      BlockTally& t = tallies[b];
      const std::uint64_t end = std::min(trials, (b + 1) * kBlockTrials);
      for (std::uint64_t i = b * kBlockTrials; i < end; ++i) {
        std::mt19937_64 rng(stream_seed(seed, i));
        trial(rng, t);
      }
    }
  };
  workers = std::max(1U, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  BlockTally total;
  for (const auto& t : tallies) {
    total.failures += t.failures;
    total.wrong += t.wrong;
    total.weight_sum += t.weight_sum;
    total.weight_sq_sum += t.weight_sq_sum;
  }
  return total;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SimReport base_report(const Codec& codec, const char* mode, double p, double p_star,
                      std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  SimReport r;
  r.code = codec.id();
  r.n = codec.n();
  r.k = codec.k();
  r.mode = mode;
  r.p = p;
  r.p_star = p_star;
  r.trials = trials;
  r.seed = seed;
  r.workers = std::max(1U, workers);
  return r;
}

// Pairwise summation of a vector of non-negative terms.
double pairwise_sum(const double* first, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += first[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(first, half) + pairwise_sum(first + half, count - half);
}

}  // namespace

void validate_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 0.5)) {
    throw UsageError(std::string(what) + " must lie in [0, 0.5], got " + std::to_string(p));
  }
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void bsc_apply_inplace(std::mt19937_64& rng, BitVector& word, double p) {
  validate_probability(p, "crossover probability");
  if (p == 0.0) return;
  // Gaps between flips are geometric; exact in distribution and cheap for small p.
  std::geometric_distribution<std::uint64_t> gap(p);
  const std::uint64_t n = word.size();
  for (std::uint64_t pos = gap(rng); pos < n; pos += 1 + gap(rng)) word.flip(pos);
}

BitVector bsc_apply(std::mt19937_64& rng, const BitVector& word, double p) {
  BitVector out = word;
  bsc_apply_inplace(rng, out, p);
  return out;
}

std::pair<double, double> clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                          double confidence) {
  if (trials == 0 || successes > trials) throw UsageError("clopper_pearson: need 0 <= k <= n, n > 0");
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  const double low = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1, alpha / 2);
  const double high = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1, n - k, 1 - alpha / 2);
  return {low, high};
}

SimReport monte_carlo_block_error(const Codec& codec, double p, std::uint64_t trials,
                                  std::uint64_t seed, unsigned workers) {
  validate_probability(p, "p");
  if (trials < 1) throw UsageError("monte_carlo_block_error: trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const BlockTally t = run_blocks(trials, seed, workers, [&](std::mt19937_64& rng, BlockTally& tally) {
    const BitVector info = random_bits(codec.k(), rng);
    BitVector word = codec.encode(info);
    bsc_apply_inplace(rng, word, p);
    const auto decoded = codec.decode(word);
    if (!decoded) {
      ++tally.failures;
    } else if (*decoded != info) {
      ++tally.failures;
      ++tally.wrong;
    }
  });
  SimReport r = base_report(codec, "mc", p, p, trials, seed, workers);
  r.failures = t.failures;
  r.wrong_key = t.wrong;
  r.p_err = static_cast<double>(t.failures) / static_cast<double>(trials);
  std::tie(r.ci_low, r.ci_high) = clopper_pearson(t.failures, trials);
  r.wall_time = elapsed_since(start);
  return r;
}

SimReport importance_sampled_block_error(const Codec& codec, double p, double p_star,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers) {
  validate_probability(p, "p");
  validate_probability(p_star, "p_star");
  if (p_star < p) throw UsageError("importance sampling needs p <= p_star");
  if (trials < 1) throw UsageError("importance_sampled_block_error: trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const double n = static_cast<double>(codec.n());
  const double log_flip = p == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(p / p_star);
  const double log_keep = std::log1p(-p) - std::log1p(-p_star);
  const BlockTally t = run_blocks(trials, seed, workers, [&](std::mt19937_64& rng, BlockTally& tally) {
    const BitVector info = random_bits(codec.k(), rng);
    const BitVector sent = codec.encode(info);
    BitVector word = sent;
    bsc_apply_inplace(rng, word, p_star);
    const auto decoded = codec.decode(word);
    const bool failed = !decoded || *decoded != info;
    if (!failed) return;
    ++tally.failures;
    if (decoded) ++tally.wrong;
    const auto w = static_cast<double>(hamming_distance(word, sent));
    const double lr = std::exp((w == 0 ? 0.0 : w * log_flip) + (n - w) * log_keep);
    tally.weight_sum += lr;
    tally.weight_sq_sum += lr * lr;
  });
  SimReport r = base_report(codec, "is", p, p_star, trials, seed, workers);
  r.failures = t.failures;
  r.wrong_key = t.wrong;
  const auto count = static_cast<double>(trials);
  r.p_err = t.weight_sum / count;
  const double variance = std::max(0.0, t.weight_sq_sum / count - r.p_err * r.p_err) / count;
  const double se = std::sqrt(variance);
  r.ci_low = std::max(0.0, r.p_err - 1.959963984540054 * se);
  r.ci_high = r.p_err + 1.959963984540054 * se;
  r.relative_error = r.p_err > 0.0 ? se / r.p_err : std::numeric_limits<double>::infinity();
  r.wall_time = elapsed_since(start);
  return r;
}

// ---------------------------------------------------------------- inner outcomes

double InnerOutcomeDistribution::total() const {
  double s = erasure;
  for (const auto& o : outcomes) s += o.probability;
  return s;
}

double InnerOutcomeDistribution::probability(std::size_t codeword, std::size_t distance) const {
  for (const auto& o : outcomes) {
    if (o.codeword == codeword && o.distance == distance) return o.probability;
  }
  return 0.0;
}

double InnerOutcomeDistribution::probability_of_codeword(std::size_t codeword) const {
  double s = 0.0;
  for (const auto& o : outcomes) {
    if (o.codeword == codeword) s += o.probability;
  }
  return s;
}

InnerOutcomeDistribution inner_outcome_distribution(const Codebook& codebook, double p) {
  validate_probability(p, "p");
  const std::size_t n = codebook.code().n();
  if (n > 20) throw UsageError("inner_outcome_distribution: length " + std::to_string(n) + " exceeds 20");
  std::vector<double> weight_prob(n + 1);
  for (std::size_t w = 0; w <= n; ++w) {
    weight_prob[w] = std::pow(p, static_cast<double>(w)) * std::pow(1.0 - p, static_cast<double>(n - w));
  }
  // Pattern counts per (codeword, distance, error weight); probabilities are
  // formed afterwards so that each outcome is a short exact-count sum.
  const std::size_t cells = codebook.size() * (n + 1);
  std::vector<std::uint64_t> counts(cells * (n + 1), 0);
  std::vector<std::uint64_t> erasure_counts(n + 1, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t r = 0; r < total; ++r) {
    const auto best = codebook.nearest(std::span<const std::uint64_t>(&r, 1));
    const auto w = static_cast<std::size_t>(std::popcount(r));
    if (best.tie) {
      ++erasure_counts[w];
    } else {
      ++counts[(best.index * (n + 1) + best.distance) * (n + 1) + w];
    }
  }
  InnerOutcomeDistribution dist;
  dist.p = p;
  dist.n = n;
  for (std::size_t w = 0; w <= n; ++w) {
    dist.erasure += static_cast<double>(erasure_counts[w]) * weight_prob[w];
    dist.erasure_patterns += erasure_counts[w];
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    InnerOutcome o{cell / (n + 1), cell % (n + 1), 0.0, 0};
    for (std::size_t w = 0; w <= n; ++w) {
      const std::uint64_t c = counts[cell * (n + 1) + w];
      o.patterns += c;
      o.probability += static_cast<double>(c) * weight_prob[w];
    }
    if (o.patterns > 0) dist.outcomes.push_back(o);
  }
  return dist;
}

InnerOutcomeCounts sample_inner_outcomes(const Codebook& codebook, double p, std::uint64_t rows,
                                         std::uint64_t seed) {
  validate_probability(p, "p");
  const std::size_t n = codebook.code().n();
  if (n > 64) throw UsageError("sample_inner_outcomes: length above 64");
  InnerOutcomeCounts out;
  out.rows = rows;
  out.n = n;
  out.counts.assign(codebook.size() * (n + 1), 0);
  std::mt19937_64 rng(stream_seed(seed, 0));
  BitVector word(n);
  for (std::uint64_t i = 0; i < rows; ++i) {
    word = BitVector(n);
    bsc_apply_inplace(rng, word, p);
    const auto best = codebook.nearest(word.words());
    if (best.tie) {
      ++out.erasures;
    } else {
      ++out.counts[best.index * (n + 1) + best.distance];
    }
  }
  return out;
}

// ---------------------------------------------------------------- analytic baseline

double binomial_upper_tail(std::size_t n, std::size_t t, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("binomial_upper_tail: p must lie in [0, 1]");
  if (t == 0) return 1.0;
  if (t > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const auto nd = static_cast<double>(n);
  std::vector<double> logs;
  for (std::size_t i = t; i <= n; ++i) {
    const auto id = static_cast<double>(i);
    logs.push_back(std::lgamma(nd + 1) - std::lgamma(id + 1) - std::lgamma(nd - id + 1) + id * log_p +
                   (nd - id) * log_q);
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> scaled(logs.size());
  std::transform(logs.begin(), logs.end(), scaled.begin(), [top](double l) { return std::exp(l - top); });
  return std::exp(top + std::log(pairwise_sum(scaled.data(), scaled.size())));
}

double baseline_bch_rep_perr(double p) {
  validate_probability(p, "p");
  const BaselineScheme s;
  const double symbol_error = binomial_upper_tail(s.repetition, s.repetition / 2 + 1, p);
  const std::size_t t = (s.outer_d - 1) / 2;
  return binomial_upper_tail(s.outer_n, t + 1, symbol_error);
}

}  // namespace pufgcc

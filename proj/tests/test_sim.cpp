#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pufgcc/codec.hpp"
#include "pufgcc/error.hpp"
#include "pufgcc/gcc.hpp"
#include "pufgcc/sim.hpp"

using namespace pufgcc;

TEST_CASE("probability validation") {
  CHECK_NOTHROW(validate_probability(0.0, "p"));
  CHECK_NOTHROW(validate_probability(0.5, "p"));
  CHECK_THROWS_AS(validate_probability(-0.01, "p"), UsageError);
  CHECK_THROWS_AS(validate_probability(0.51, "p"), UsageError);
  CHECK_THROWS_AS(validate_probability(std::numeric_limits<double>::quiet_NaN(), "p"), UsageError);
}

TEST_CASE("stream seeds") {
  CHECK(stream_seed(1, 0) == stream_seed(1, 0));
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
}

TEST_CASE("binary symmetric channel") {
  std::mt19937_64 rng(1);
  const BitVector zeros(100000);
  CHECK(bsc_apply(rng, zeros, 0.0) == zeros);

  auto fraction = [&](double p, std::size_t n) {
    return static_cast<double>(bsc_apply(rng, BitVector(n), p).weight()) / static_cast<double>(n);
  };
  const double half = fraction(0.5, 100000);
  CHECK(std::abs(half - 0.5) <= 3 * std::sqrt(0.25 / 100000));
  const double f = fraction(0.14, 1000000);
  CHECK(f >= 0.1389);
  CHECK(f <= 0.1411);
  CHECK(fraction(0.02, 1000000) == doctest::Approx(0.02).epsilon(0.03));

  std::mt19937_64 a(9);
  std::mt19937_64 b(9);
  CHECK(bsc_apply(a, BitVector(5000), 0.3) == bsc_apply(b, BitVector(5000), 0.3));
}

TEST_CASE("Clopper-Pearson interval") {
  auto [lo0, hi0] = clopper_pearson(0, 1000000);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(3.6888726502064885e-06).epsilon(1e-9));
  auto [lo1, hi1] = clopper_pearson(5, 100);
  CHECK(lo1 == doctest::Approx(0.016431879182052155).epsilon(1e-9));
  CHECK(hi1 == doctest::Approx(0.11283491110546275).epsilon(1e-9));
  auto [lo2, hi2] = clopper_pearson(100, 100);
  CHECK(lo2 == doctest::Approx(0.9637833073548235).epsilon(1e-9));
  CHECK(hi2 == 1.0);
  auto [lo3, hi3] = clopper_pearson(3, 10);
  CHECK(lo3 == doctest::Approx(0.06673951117773447).epsilon(1e-9));
  CHECK(hi3 == doctest::Approx(0.6524528500599973).epsilon(1e-9));
  CHECK_THROWS_AS(clopper_pearson(1, 0), UsageError);
}

TEST_CASE("Monte Carlo block error") {
  const auto toy = make_codec("toy-64-19");
  const auto clean = monte_carlo_block_error(*toy, 0.0, 5000, 1);
  CHECK(clean.failures == 0);
  CHECK(clean.p_err == 0.0);
  CHECK(clean.ci_low == 0.0);
  CHECK_THROWS_AS(monte_carlo_block_error(*toy, 0.1, 0, 1), UsageError);

  const auto a = monte_carlo_block_error(*toy, 0.05, 100000, 11);
  const auto b = monte_carlo_block_error(*toy, 0.05, 100000, 12);
  CHECK(a.failures > 0);
  CHECK(a.failures <= a.trials);
  CHECK(a.wrong_key <= a.failures);
  CHECK(a.ci_low <= a.p_err);
  CHECK(a.p_err <= a.ci_high);
  CHECK(a.p_err >= b.ci_low);
  CHECK(a.p_err <= b.ci_high);
  MESSAGE("toy p=0.05: " << a.p_err << " [" << a.ci_low << ", " << a.ci_high << "]");

  const auto c = monte_carlo_block_error(*toy, 0.12, 20000, 11);
  CHECK(c.p_err > a.p_err);
}

TEST_CASE("results do not depend on the worker count") {
  const auto toy = make_codec("toy-64-19");
  const auto one = monte_carlo_block_error(*toy, 0.08, 9000, 5, 1);
  for (unsigned workers : {2U, 3U, 8U}) {
    const auto many = monte_carlo_block_error(*toy, 0.08, 9000, 5, workers);
    CHECK(many.failures == one.failures);
    CHECK(many.wrong_key == one.wrong_key);
    CHECK(many.workers == workers);
  }
  const auto is1 = importance_sampled_block_error(*toy, 0.02, 0.1, 5000, 5, 1);
  const auto is4 = importance_sampled_block_error(*toy, 0.02, 0.1, 5000, 5, 4);
  CHECK(is1.failures == is4.failures);
  CHECK(is1.p_err == is4.p_err);
}

TEST_CASE("importance sampling") {
  const auto toy = make_codec("toy-64-19");
  CHECK_THROWS_AS(importance_sampled_block_error(*toy, 0.1, 0.05, 100, 1), UsageError);

  // With p_star = p all weights are 1 and the draws match plain Monte Carlo.
  const auto mc = monte_carlo_block_error(*toy, 0.06, 50000, 3);
  const auto same = importance_sampled_block_error(*toy, 0.06, 0.06, 50000, 3);
  CHECK(same.failures == mc.failures);
  CHECK(same.p_err == doctest::Approx(mc.p_err).epsilon(1e-12));
  const auto other = importance_sampled_block_error(*toy, 0.06, 0.06, 50000, 4);
  const double sigma = std::sqrt(mc.p_err * (1 - mc.p_err) / 50000.0);
  CHECK(std::abs(other.p_err - mc.p_err) <= 3 * std::sqrt(2.0) * sigma);

  const auto tilted = importance_sampled_block_error(*toy, 0.04, 0.1, 100000, 6);
  const auto plain = monte_carlo_block_error(*toy, 0.04, 100000, 7);
  CHECK(tilted.ci_low <= plain.ci_high);
  CHECK(plain.ci_low <= tilted.ci_high);
  CHECK(tilted.relative_error < 0.1);
  CHECK(importance_sampled_block_error(*toy, 0.0, 0.1, 2000, 1).p_err == 0.0);
}

TEST_CASE("exact inner outcome distribution") {
  const auto spec = puf_gcc_2048();
  const auto& cb = spec.partition().parent_codebook();

  const auto zero = inner_outcome_distribution(cb, 0.0);
  CHECK(zero.probability(0, 0) == 1.0);
  CHECK(zero.erasure == 0.0);

  const auto d = inner_outcome_distribution(cb, 0.14);
  CHECK(std::abs(d.total() - 1.0) < 1e-12);
  CHECK(d.probability_of_codeword(0) == doctest::Approx(0.82374556442582053).epsilon(1e-12));
  CHECK(d.erasure == doctest::Approx(0.15563314609820844).epsilon(1e-12));
  double correct_label = 0;
  for (const auto& o : d.outcomes) {
    if (spec.partition().label_of(o.codeword) == 0) correct_label += o.probability;
  }
  CHECK(correct_label == doctest::Approx(0.82374556735374766).epsilon(1e-12));
  std::uint64_t patterns = d.erasure_patterns;
  for (const auto& o : d.outcomes) patterns += o.patterns;
  CHECK(patterns == 65536);

  CHECK_THROWS_AS(inner_outcome_distribution(build_codebook(rm_code(1, 5)), 0.1), UsageError);
}

TEST_CASE("sampled inner outcomes agree with the exact distribution") {
  const auto spec = puf_gcc_2048();
  const auto& cb = spec.partition().parent_codebook();
  const std::uint64_t rows = 200000;
  for (double p : {0.05, 0.14, 0.25}) {
    const auto exact = inner_outcome_distribution(cb, p);
    const auto sampled = sample_inner_outcomes(cb, p, rows, 77);
    CHECK(sampled.rows == rows);
    auto within = [&](double prob, std::uint64_t count) {
      const double mean = prob * static_cast<double>(rows);
      const double sigma = std::sqrt(static_cast<double>(rows) * prob * (1 - prob));
      return std::abs(static_cast<double>(count) - mean) <= 3 * sigma + 1e-9;
    };
    CHECK(within(exact.erasure, sampled.erasures));
    std::uint64_t correct = 0;
    for (std::size_t dist = 0; dist <= 16; ++dist) correct += sampled.count(0, dist);
    CHECK(within(exact.probability_of_codeword(0), correct));
    for (std::size_t dist = 0; dist <= 3; ++dist) CHECK(within(exact.probability(0, dist), sampled.count(0, dist)));
  }
}

TEST_CASE("binomial tails and the baseline scheme") {
  CHECK(binomial_upper_tail(7, 4, 0.14) == doctest::Approx(0.0094338632192).epsilon(1e-12));
  CHECK(binomial_upper_tail(7, 0, 0.3) == doctest::Approx(1.0));
  CHECK(binomial_upper_tail(7, 8, 0.3) == 0.0);
  CHECK(binomial_upper_tail(10, 1, 0.0) == 0.0);

  const double at14 = baseline_bch_rep_perr(0.14);
  CHECK(at14 == doctest::Approx(2.5350301001381378331e-9).epsilon(1e-12));
  CHECK(at14 > 1e-10);
  CHECK(at14 < 1e-8);
  CHECK(baseline_bch_rep_perr(0.0) == 0.0);
  CHECK(baseline_bch_rep_perr(0.10) == doctest::Approx(3.4108828162661994523e-18).epsilon(1e-10));
  CHECK(baseline_bch_rep_perr(0.20) == doctest::Approx(0.021749567266218917368).epsilon(1e-12));
  CHECK(baseline_bch_rep_perr(0.05) == doctest::Approx(1.4587176855747485168e-38).epsilon(1e-9));
  CHECK(baseline_bch_rep_perr(0.10) < at14);
  CHECK(at14 < baseline_bch_rep_perr(0.20));
  CHECK(BaselineScheme{}.length() == 2226);
}

#include "pufgcc/gmd.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <tuple>

#include "pufgcc/error.hpp"

namespace pufgcc {

void ReliabilityVector::set_weight(std::size_t i, std::uint32_t w) {
  if (erased_.test(i) && w != 0) throw UsageError("erased positions must have reliability 0");
  weights_.at(i) = w;
}

void ReliabilityVector::erase(std::size_t i) {
  erased_.set(i);
  weights_.at(i) = 0;
}

std::uint32_t reliability_from_distance(std::size_t inner_distance, std::size_t distance) {
  return 2 * distance >= inner_distance ? 0U
                                        : static_cast<std::uint32_t>(inner_distance - 2 * distance);
}

GmdResult gmd_decode_detailed(const HardDecoder& decoder, const BitVector& hard,
                              const ReliabilityVector& reliability) {
  const LinearCode& code = decoder.code();
  if (hard.size() != code.n() || reliability.size() != code.n()) {
    throw UsageError("gmd_decode: hard word and reliabilities must have length n=" +
                     std::to_string(code.n()));
  }
  const std::size_t n = code.n();
  const std::size_t d = code.d();
  const BitVector& pre_erased = reliability.erasures();
  const BitVector scored = ~pre_erased;

  // Non-erased positions, least reliable first.
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reliability.erased(i)) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reliability.weight(a) < reliability.weight(b);
  });

  // Every other codeword scores at least floor - score.
  const std::size_t spread = std::min(order.size(), d - std::min(d, pre_erased.weight()));
  std::uint64_t floor = 0;
  for (std::size_t i = 0; i < spread; ++i) floor += reliability.weight(order[i]);

  GmdResult best;
  std::tuple<std::uint64_t, std::size_t> best_key{0, 0};
  bool have_best = false;

  BitVector erasures = pre_erased;
  std::size_t erased_count = pre_erased.weight();
  std::size_t next = 0;
  std::size_t trials = 0;
  while (erased_count < d) {
    DecodeOutcome out = error_erasure_decode(decoder, hard, erasures);
    ++trials;
    if (out.unique()) {
      BitVector diff = out.codeword ^ hard;
      diff &= scored;
      std::uint64_t score = 0;
      std::size_t mismatches = 0;
      auto words = diff.words();
      for (std::size_t w = 0; w < words.size(); ++w) {
        for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
          score += reliability.weight(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
          ++mismatches;
        }
      }
      const std::tuple<std::uint64_t, std::size_t> key{score, mismatches};
      if (!have_best || key < best_key) {
        have_best = true;
        best_key = key;
        best.outcome = std::move(out);
        best.score = score;
      }
      if (mismatches == 0 || 2 * score < floor) break;
    }
    if (next >= order.size()) break;
    for (int step = 0; step < 2 && next < order.size(); ++step, ++next) {
      erasures.set(order[next]);
      ++erased_count;
    }
  }
  best.trials = trials;
  if (!have_best) best.outcome = DecodeOutcome::failure();
  return best;
}

}  // namespace pufgcc

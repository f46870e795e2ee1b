#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/codes.hpp"

namespace pufgcc {

/// Per-position reliability weights (higher = more trustworthy) with an
/// optional hard-erasure mark. Erased positions carry weight 0.
class ReliabilityVector {
 public:
  explicit ReliabilityVector(std::size_t length) : weights_(length, 0), erased_(length) {}

  std::size_t size() const { return weights_.size(); }

  std::uint32_t weight(std::size_t i) const { return weights_.at(i); }
  bool erased(std::size_t i) const { return erased_.test(i); }
  const BitVector& erasures() const { return erased_; }

  void set_weight(std::size_t i, std::uint32_t w);
  void erase(std::size_t i);

 private:
  std::vector<std::uint32_t> weights_;
  BitVector erased_;
};

/// Weight for a position decoded by an inner code of minimum distance
/// `inner_distance` at Hamming distance `distance`: max(0, d - 2 * dist).
std::uint32_t reliability_from_distance(std::size_t inner_distance, std::size_t distance);

struct GmdResult {
  DecodeOutcome outcome;
  std::uint64_t score = 0;  // weighted mismatch of the selected candidate
  std::size_t trials = 0;   // error-erasure attempts made
};

/// Generalized minimum distance decoding.
///
/// Trial 0 erases the hard-erased positions E0; every following trial also
/// erases the next two least reliable positions (ties: lower index first)
/// while fewer than d positions are erased. Each Unique candidate is scored by
/// the total weight of its mismatches outside E0; the lowest score wins, then
/// the fewest mismatches, then the earliest trial.
GmdResult gmd_decode_detailed(const HardDecoder& decoder, const BitVector& hard,
                              const ReliabilityVector& reliability);

inline DecodeOutcome gmd_decode(const HardDecoder& decoder, const BitVector& hard,
                                const ReliabilityVector& reliability) {
  return gmd_decode_detailed(decoder, hard, reliability).outcome;
}

}  // namespace pufgcc

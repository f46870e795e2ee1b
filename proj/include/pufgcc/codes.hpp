/**
 * \file codes.hpp
 * \brief Binary linear codes: Reed-Muller construction, encoding, and the
 * hard-decision decoders (maximum likelihood, majority logic, error-erasure).
 *
 * Information bits map to generator rows in order: info bit i selects row i.
 * Reed-Muller generator rows are the evaluations of the monomials of degree
 * <= r, sorted by degree and then lexicographically by variable index, so row 0
 * is always the all-ones word. Point j of GF(2)^m has x_i = bit i of j.
 *
 * First-order codes RM(1, m) are what some literature calls "Simplex" codes;
 * strictly, the Simplex code is the punctured (2^m - 1, m) code. The (16,5,8)
 * inner code used here is RM(1,4) and is labelled accordingly.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pufgcc/bits.hpp"

namespace pufgcc {

struct CodeParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;

  bool operator==(const CodeParams&) const = default;
};

namespace detail {
struct CodeData;
struct RmStructure;
}  // namespace detail

/// Immutable, cheap to copy (shared internal state).
class LinearCode {
 public:
  /// Validates that `generator` has full row rank and derives the parity check.
  LinearCode(BitMatrix generator, std::size_t min_distance, std::string label);

  const CodeParams& params() const;
  std::size_t n() const { return params().n; }
  std::size_t k() const { return params().k; }
  std::size_t d() const { return params().d; }
  const BitMatrix& generator() const;
  const BitMatrix& parity_check() const;
  const std::string& label() const;

  bool is_reed_muller() const { return reed_muller() != nullptr; }
  /// RM order r, or -1 for codes not built by rm_code().
  int rm_order() const;

  /// Majority-logic tables; non-null only for codes built by rm_code().
  const detail::RmStructure* reed_muller() const;

 private:
  friend LinearCode rm_code(int r, int m);
  explicit LinearCode(std::shared_ptr<const detail::CodeData> data);

  std::shared_ptr<const detail::CodeData> data_;
};

/// RM(r, m): n = 2^m, k = sum_{i<=r} C(m, i), d = 2^(m-r).
LinearCode rm_code(int r, int m);

/// Repetition code of arbitrary length n (d = n).
LinearCode repetition_code(std::size_t n);

/// Code from an arbitrary generator; the minimum distance is found by
/// enumerating all 2^k codewords, so k is limited to 24.
LinearCode linear_code(BitMatrix generator, std::string label);

BitVector encode(const LinearCode& code, const BitVector& info);
bool is_codeword(const LinearCode& code, const BitVector& word);

enum class DecodeStatus { Unique, Erasure, Failure };

struct DecodeOutcome {
  DecodeStatus status = DecodeStatus::Failure;
  BitVector codeword;        // Unique only
  BitVector info;            // Unique only
  std::size_t distance = 0;  // Unique only: mismatches between received and codeword

  bool unique() const { return status == DecodeStatus::Unique; }

  static DecodeOutcome make_unique(BitVector codeword, BitVector info, std::size_t distance);
  static DecodeOutcome erasure() { return {DecodeStatus::Erasure, {}, {}, 0}; }
  static DecodeOutcome failure() { return {DecodeStatus::Failure, {}, {}, 0}; }
};

/// All 2^k codewords, indexed by the integer whose bit i is info bit i.
class Codebook {
 public:
  static constexpr std::size_t kDefaultBound = std::size_t{1} << 20;

  struct Nearest {
    std::size_t index = 0;
    std::size_t distance = 0;
    bool tie = false;
  };

  const LinearCode& code() const { return code_; }
  std::size_t size() const { return count_; }
  BitVector word(std::size_t index) const;
  BitVector info(std::size_t index) const;
  std::span<const std::uint64_t> word_words(std::size_t index) const;

  /// Closest codeword to `received` (given as packed words of length n); `tie`
  /// is set when another codeword is equally close.
  Nearest nearest(std::span<const std::uint64_t> received) const;

  /// Short codes with few codewords also get a full decision table.
  static constexpr std::size_t kTableBits = 16;

 private:
  Nearest search(std::span<const std::uint64_t> received) const;

  friend Codebook build_codebook(const LinearCode& code, std::size_t bound);
  explicit Codebook(LinearCode code) : code_(std::move(code)) {}

  LinearCode code_;
  std::size_t count_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> table_;  // index | distance << 16 | tie << 24
};

/// Refuses (UsageError) when 2^k exceeds `bound`.
Codebook build_codebook(const LinearCode& code, std::size_t bound = Codebook::kDefaultBound);

/// Sole nearest codeword, or Erasure on a tie. Never Failure.
DecodeOutcome ml_decode(const Codebook& codebook, const BitVector& received);

/// Reed's majority-logic decoder for RM codes. Bounded distance: corrects
/// every pattern of weight < d/2; a tied vote or a result outside that radius
/// yields Failure.
DecodeOutcome reed_decode(const LinearCode& code, const BitVector& received);

/// A hard-decision bounded-distance decoder bound to one code.
class HardDecoder {
 public:
  enum class Kind { MaximumLikelihood, MajorityLogic };

  static HardDecoder maximum_likelihood(const LinearCode& code,
                                        std::size_t bound = Codebook::kDefaultBound);
  static HardDecoder majority_logic(const LinearCode& code);
  /// ML for first-order RM and non-RM codes, majority logic for other RM codes.
  static HardDecoder preferred(const LinearCode& code);

  DecodeOutcome operator()(const BitVector& received) const;

  const LinearCode& code() const { return code_; }
  Kind kind() const { return kind_; }
  const Codebook* codebook() const { return codebook_.get(); }

 private:
  HardDecoder(Kind kind, LinearCode code, std::shared_ptr<const Codebook> codebook)
      : kind_(kind), code_(std::move(code)), codebook_(std::move(codebook)) {}

  Kind kind_;
  LinearCode code_;
  std::shared_ptr<const Codebook> codebook_;
};

/// Error-and-erasure decoding via the two constant fillings of the erased
/// positions. Corrects e errors and tau erasures whenever 2e + tau < d.
/// `erasures` is a mask of length n. On success `distance` counts mismatches
/// on non-erased positions only.
DecodeOutcome error_erasure_decode(const HardDecoder& decoder, const BitVector& received,
                                   const BitVector& erasures);

}  // namespace pufgcc

/**
 * \file gcc.hpp
 * \brief Two-level generalized concatenated (GC) codes.
 *
 * A GC codeword is an n_outer x n_inner matrix whose rows are inner
 * codewords. The inner code is split into cosets of a subcode of larger
 * minimum distance. Each row's coset label bits are protected column-wise by
 * one outer "label" code per bit; the element bit that picks a word inside
 * the coset is protected by the outer "element" code.
 *
 * Flattened, row j occupies bits [j * n_inner, (j + 1) * n_inner).
 * Information layout: the label-code segments in label-bit order, then the
 * element-code segment.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/codes.hpp"
#include "pufgcc/gmd.hpp"

namespace pufgcc {

class CosetPartition {
 public:
  const LinearCode& parent() const { return parent_; }
  const Codebook& parent_codebook() const { return *codebook_; }
  const LinearCode& subcode() const { return subcode_; }

  /// Parent generator rows spanning the subcode.
  const std::vector<std::size_t>& subcode_rows() const { return subcode_rows_; }
  /// The remaining rows; label bit b is the info bit on label_rows()[b].
  const std::vector<std::size_t>& label_rows() const { return label_rows_; }

  std::size_t label_bits() const { return label_rows_.size(); }
  std::size_t element_bits() const { return subcode_rows_.size(); }
  std::size_t coset_count() const { return std::size_t{1} << label_bits(); }

  /// Codeword encoding `label` on the label rows with zero element bits.
  BitVector representative(std::uint64_t label) const;
  /// Parent codebook index of the word with the given label and element bits.
  std::size_t index_of(std::uint64_t label, std::uint64_t element) const;
  std::uint64_t label_of(std::size_t codebook_index) const;
  std::uint64_t element_of(std::size_t codebook_index) const;
  /// Codebook indices of all members of a coset.
  std::vector<std::size_t> coset(std::uint64_t label) const;

 private:
  friend CosetPartition coset_partition(const LinearCode&, std::vector<std::size_t>);
  CosetPartition(LinearCode parent, LinearCode subcode) : parent_(std::move(parent)), subcode_(std::move(subcode)) {}

  LinearCode parent_;
  LinearCode subcode_;
  std::shared_ptr<const Codebook> codebook_;
  std::vector<std::size_t> subcode_rows_;
  std::vector<std::size_t> label_rows_;
};

/// Refuses (UsageError) unless the selected rows span a proper, nonzero
/// subcode with minimum distance strictly larger than the parent's.
CosetPartition coset_partition(const LinearCode& inner, std::vector<std::size_t> subcode_rows);

struct GcDecoded {
  BitVector info;
  BitMatrix codeword;
};

/// Per-row result of the two decoding stages, exposed for analysis.
struct GcTrace {
  std::vector<bool> stage1_erased;
  std::vector<bool> stage2_erased;
  std::size_t label_trials = 0;
  std::size_t element_trials = 0;
};

class GcCodeSpec {
 public:
  /// Requires a one-dimensional subcode, one label code per label bit, and
  /// all outer codes of equal length. Inner length is limited to 64 bits.
  GcCodeSpec(std::string id, CosetPartition partition, std::vector<LinearCode> label_codes,
             LinearCode element_code);

  const std::string& id() const { return id_; }
  std::size_t n() const { return n_outer_ * n_inner_; }
  std::size_t k() const { return k_; }
  std::size_t n_outer() const { return n_outer_; }
  std::size_t n_inner() const { return n_inner_; }
  /// min(d(label codes) * d(inner), d(element code) * d(subcode))
  std::size_t designed_distance() const;
  CodeParams params() const { return {n(), k(), designed_distance()}; }

  const LinearCode& inner() const { return partition_.parent(); }
  const CosetPartition& partition() const { return partition_; }
  const std::vector<LinearCode>& label_codes() const { return label_codes_; }
  const LinearCode& element_code() const { return element_code_; }
  const std::vector<HardDecoder>& label_decoders() const { return label_decoders_; }
  const HardDecoder& element_decoder() const { return element_decoder_; }

 private:
  std::string id_;
  CosetPartition partition_;
  std::vector<LinearCode> label_codes_;
  LinearCode element_code_;
  std::vector<HardDecoder> label_decoders_;
  HardDecoder element_decoder_;
  std::size_t n_outer_ = 0;
  std::size_t n_inner_ = 0;
  std::size_t k_ = 0;
};

/// Inner RM(1,4) split on its all-ones row, four RM(1,7) label codes and an
/// RM(4,7) element code: a (2048, 131) code with designed distance 128.
GcCodeSpec puf_gcc_2048();

/// Miniature of the same construction: inner RM(1,3), three RM(1,3) label
/// codes, RM(2,3) element code; (64, 19), designed distance 16.
GcCodeSpec toy_gcc();

BitMatrix gc_encode(const GcCodeSpec& spec, const BitVector& info);
BitVector gc_encode_flat(const GcCodeSpec& spec, const BitVector& info);

/// Two-stage decoding: inner ML per row, GMD on each label code, ML inside
/// the decoded coset per row, GMD on the element code. nullopt on any outer
/// decoding failure; partial results are never returned.
std::optional<GcDecoded> gc_decode(const GcCodeSpec& spec, const BitMatrix& received);

/// Flattened form; returns only the recovered information bits.
std::optional<BitVector> gc_decode_flat(const GcCodeSpec& spec, const BitVector& received,
                                        GcTrace* trace = nullptr);

BitVector flatten(const BitMatrix& m);
BitMatrix unflatten(const BitVector& v, std::size_t rows, std::size_t cols);

}  // namespace pufgcc

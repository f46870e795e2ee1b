#include "pufgcc/gcc.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "pufgcc/error.hpp"

namespace pufgcc {

// ---------------------------------------------------------------- CosetPartition

CosetPartition coset_partition(const LinearCode& inner, std::vector<std::size_t> subcode_rows) {
  std::sort(subcode_rows.begin(), subcode_rows.end());
  subcode_rows.erase(std::unique(subcode_rows.begin(), subcode_rows.end()), subcode_rows.end());
  if (subcode_rows.empty()) throw UsageError("coset_partition: subcode must have at least one row");
  if (subcode_rows.back() >= inner.k()) throw UsageError("coset_partition: subcode row out of range");
  if (subcode_rows.size() == inner.k()) {
    throw UsageError("coset_partition: subcode equals the whole code; no label bits remain");
  }

  BitMatrix sub(subcode_rows.size(), inner.n());
  for (std::size_t i = 0; i < subcode_rows.size(); ++i) sub.set_row(i, inner.generator().row(subcode_rows[i]));
  LinearCode subcode = linear_code(std::move(sub), inner.label() + "/sub");
  if (subcode.d() <= inner.d()) {
    throw UsageError("coset_partition: subcode distance " + std::to_string(subcode.d()) +
                     " does not exceed the parent distance " + std::to_string(inner.d()));
  }

  CosetPartition p(inner, std::move(subcode));
  p.codebook_ = std::make_shared<const Codebook>(build_codebook(inner));
  for (std::size_t r = 0; r < inner.k(); ++r) {
    if (!std::binary_search(subcode_rows.begin(), subcode_rows.end(), r)) p.label_rows_.push_back(r);
  }
  p.subcode_rows_ = std::move(subcode_rows);
  return p;
}

std::size_t CosetPartition::index_of(std::uint64_t label, std::uint64_t element) const {
  std::size_t index = 0;
  for (std::size_t b = 0; b < label_rows_.size(); ++b) {
    if ((label >> b) & 1U) index |= std::size_t{1} << label_rows_[b];
  }
  for (std::size_t b = 0; b < subcode_rows_.size(); ++b) {
    if ((element >> b) & 1U) index |= std::size_t{1} << subcode_rows_[b];
  }
  return index;
}

std::uint64_t CosetPartition::label_of(std::size_t codebook_index) const {
  std::uint64_t label = 0;
  for (std::size_t b = 0; b < label_rows_.size(); ++b) {
    if ((codebook_index >> label_rows_[b]) & 1U) label |= std::uint64_t{1} << b;
  }
  return label;
}

std::uint64_t CosetPartition::element_of(std::size_t codebook_index) const {
  std::uint64_t element = 0;
  for (std::size_t b = 0; b < subcode_rows_.size(); ++b) {
    if ((codebook_index >> subcode_rows_[b]) & 1U) element |= std::uint64_t{1} << b;
  }
  return element;
}

BitVector CosetPartition::representative(std::uint64_t label) const {
  if (label >= coset_count()) throw UsageError("coset label out of range");
  return codebook_->word(index_of(label, 0));
}

std::vector<std::size_t> CosetPartition::coset(std::uint64_t label) const {
  if (label >= coset_count()) throw UsageError("coset label out of range");
  std::vector<std::size_t> members;
  for (std::uint64_t e = 0; e < (std::uint64_t{1} << element_bits()); ++e) {
    members.push_back(index_of(label, e));
  }
  return members;
}

// ---------------------------------------------------------------- GcCodeSpec

GcCodeSpec::GcCodeSpec(std::string id, CosetPartition partition, std::vector<LinearCode> label_codes,
                       LinearCode element_code)
    : id_(std::move(id)),
      partition_(std::move(partition)),
      label_codes_(std::move(label_codes)),
      element_code_(std::move(element_code)),
      element_decoder_(HardDecoder::preferred(element_code_)) {
  if (partition_.element_bits() != 1) throw UsageError(id_ + ": subcode must be one-dimensional");
  if (label_codes_.size() != partition_.label_bits()) {
    throw UsageError(id_ + ": need one label code per label bit (" +
                     std::to_string(partition_.label_bits()) + "), got " +
                     std::to_string(label_codes_.size()));
  }
  n_inner_ = partition_.parent().n();
  if (n_inner_ > 64) throw UsageError(id_ + ": inner length above 64 is not supported");
  n_outer_ = element_code_.n();
  k_ = element_code_.k();
  for (const auto& c : label_codes_) {
    if (c.n() != n_outer_) throw UsageError(id_ + ": outer codes must share one length");
    k_ += c.k();
    label_decoders_.push_back(HardDecoder::preferred(c));
  }
}

std::size_t GcCodeSpec::designed_distance() const {
  std::size_t d = element_code_.d() * partition_.subcode().d();
  for (const auto& c : label_codes_) d = std::min(d, c.d() * partition_.parent().d());
  return d;
}

GcCodeSpec puf_gcc_2048() {
  const LinearCode inner = rm_code(1, 4);
  std::vector<LinearCode> labels(4, rm_code(1, 7));
  return GcCodeSpec("gcc-2048-131", coset_partition(inner, {0}), std::move(labels), rm_code(4, 7));
}

GcCodeSpec toy_gcc() {
  const LinearCode inner = rm_code(1, 3);
  std::vector<LinearCode> labels(3, rm_code(1, 3));
  return GcCodeSpec("toy-64-19", coset_partition(inner, {0}), std::move(labels), rm_code(2, 3));
}

// ---------------------------------------------------------------- encode

BitVector gc_encode_flat(const GcCodeSpec& spec, const BitVector& info) {
  if (info.size() != spec.k()) {
    throw UsageError(spec.id() + ": info length " + std::to_string(info.size()) + " != k=" +
                     std::to_string(spec.k()));
  }
  const auto& part = spec.partition();
  const std::size_t rows = spec.n_outer();
  std::vector<BitVector> label_words;
  std::size_t offset = 0;
  for (const auto& c : spec.label_codes()) {
    label_words.push_back(encode(c, info.slice(offset, c.k())));
    offset += c.k();
  }
  const BitVector element_word = encode(spec.element_code(), info.slice(offset, spec.element_code().k()));

  BitVector out(spec.n());
  const Codebook& cb = part.parent_codebook();
  for (std::size_t j = 0; j < rows; ++j) {
    std::uint64_t label = 0;
    for (std::size_t b = 0; b < label_words.size(); ++b) {
      if (label_words[b].test(j)) label |= std::uint64_t{1} << b;
    }
    const std::size_t index = part.index_of(label, element_word.test(j) ? 1 : 0);
    out.set_bits(j * spec.n_inner(), spec.n_inner(), cb.word_words(index)[0]);
  }
  return out;
}

BitMatrix gc_encode(const GcCodeSpec& spec, const BitVector& info) {
  return unflatten(gc_encode_flat(spec, info), spec.n_outer(), spec.n_inner());
}

// ---------------------------------------------------------------- decode

std::optional<BitVector> gc_decode_flat(const GcCodeSpec& spec, const BitVector& received,
                                        GcTrace* trace) {
  if (received.size() != spec.n()) {
    throw UsageError(spec.id() + ": received length " + std::to_string(received.size()) +
                     " != n=" + std::to_string(spec.n()));
  }
  const auto& part = spec.partition();
  const Codebook& cb = part.parent_codebook();
  const std::size_t rows = spec.n_outer();
  const std::size_t width = spec.n_inner();
  const std::size_t label_bits = part.label_bits();

  std::vector<std::uint64_t> row_bits(rows);
  for (std::size_t j = 0; j < rows; ++j) row_bits[j] = received.bits(j * width, width);

  // Stage 1: ML over the whole inner code, labels plus reliabilities.
  std::vector<BitVector> label_hard(label_bits, BitVector(rows));
  ReliabilityVector rel1(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const auto best = cb.nearest(std::span<const std::uint64_t>(&row_bits[j], 1));
    if (best.tie) {
      rel1.erase(j);
      continue;
    }
    const std::uint64_t label = part.label_of(best.index);
    for (std::size_t b = 0; b < label_bits; ++b) {
      if ((label >> b) & 1U) label_hard[b].set(j);
    }
    rel1.set_weight(j, reliability_from_distance(spec.inner().d(), best.distance));
  }
  if (trace != nullptr) {
    trace->stage1_erased.assign(rows, false);
    for (std::size_t j = 0; j < rows; ++j) trace->stage1_erased[j] = rel1.erased(j);
  }

  BitVector info(spec.k());
  std::size_t offset = 0;
  std::vector<std::uint64_t> labels(rows, 0);
  for (std::size_t b = 0; b < label_bits; ++b) {
    const auto result = gmd_decode_detailed(spec.label_decoders()[b], label_hard[b], rel1);
    if (trace != nullptr) trace->label_trials += result.trials;
    if (!result.outcome.unique()) return std::nullopt;
    const BitVector& word = result.outcome.codeword;
    for (std::size_t j = 0; j < rows; ++j) {
      if (word.test(j)) labels[j] |= std::uint64_t{1} << b;
    }
    const BitVector& seg = result.outcome.info;
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (seg.test(i)) info.set(offset + i);
    }
    offset += seg.size();
  }

  // Stage 2: ML inside the decoded coset of every row.
  const std::size_t sub_d = part.subcode().d();
  BitVector element_hard(rows);
  ReliabilityVector rel2(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const std::uint64_t w0 = cb.word_words(part.index_of(labels[j], 0))[0];
    const std::uint64_t w1 = cb.word_words(part.index_of(labels[j], 1))[0];
    const auto d0 = static_cast<std::size_t>(std::popcount(row_bits[j] ^ w0));
    const auto d1 = static_cast<std::size_t>(std::popcount(row_bits[j] ^ w1));
    if (d0 == d1) {
      rel2.erase(j);
      continue;
    }
    if (d1 < d0) element_hard.set(j);
    rel2.set_weight(j, reliability_from_distance(sub_d, std::min(d0, d1)));
  }
  if (trace != nullptr) {
    trace->stage2_erased.assign(rows, false);
    for (std::size_t j = 0; j < rows; ++j) trace->stage2_erased[j] = rel2.erased(j);
  }
  const auto element = gmd_decode_detailed(spec.element_decoder(), element_hard, rel2);
  if (trace != nullptr) trace->element_trials = element.trials;
  if (!element.outcome.unique()) return std::nullopt;
  const BitVector& seg = element.outcome.info;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (seg.test(i)) info.set(offset + i);
  }
  return info;
}

std::optional<GcDecoded> gc_decode(const GcCodeSpec& spec, const BitMatrix& received) {
  if (received.rows() != spec.n_outer() || received.cols() != spec.n_inner()) {
    throw UsageError(spec.id() + ": received matrix must be " + std::to_string(spec.n_outer()) +
                     " x " + std::to_string(spec.n_inner()));
  }
  auto info = gc_decode_flat(spec, flatten(received));
  if (!info) return std::nullopt;
  BitMatrix codeword = gc_encode(spec, *info);
  return GcDecoded{std::move(*info), std::move(codeword)};
}

BitVector flatten(const BitMatrix& m) {
  BitVector v(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.test(r, c)) v.set(r * m.cols() + c);
    }
  }
  return v;
}

BitMatrix unflatten(const BitVector& v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw UsageError("unflatten: length does not match shape");
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (v.test(r * cols + c)) m.set(r, c);
    }
  }
  return m;
}

}  // namespace pufgcc

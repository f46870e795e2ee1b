#include "pufgcc/codes.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "pufgcc/error.hpp"

namespace pufgcc {

namespace detail {

// One vote group per assignment of the variables outside the monomial; the
// parity of the received word over the group is one vote for its coefficient.
struct RmMonomial {
  std::uint32_t variables = 0;  // bit i set <=> x_i in the monomial
  std::size_t degree = 0;
  std::vector<BitVector> vote_masks;
};

struct RmStructure {
  int r = 0;
  int m = 0;
  std::vector<RmMonomial> monomials;  // generator row order
};

struct CodeData {
  CodeParams params;
  BitMatrix generator;
  BitMatrix parity_check;
  std::string label;
  std::shared_ptr<const RmStructure> rm;
};

}  // namespace detail

namespace {

std::shared_ptr<detail::CodeData> make_code_data(BitMatrix generator, std::size_t d,
                                                 std::string label) {
  const std::size_t n = generator.cols();
  const std::size_t k = generator.rows();
  if (k < 1 || k > n) {
    throw UsageError("code '" + label + "': need 1 <= k <= n, got k=" + std::to_string(k) +
                     ", n=" + std::to_string(n));
  }
  if (d < 1 || d > n) throw UsageError("code '" + label + "': need 1 <= d <= n");
  auto data = std::make_shared<detail::CodeData>();
  data->parity_check = nullspace_basis(generator);
  data->params = {n, k, d};
  data->generator = std::move(generator);
  data->label = std::move(label);
  return data;
}

std::size_t binomial(int n, int k) {
  std::size_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return c;
}

// All subsets of {0..m-1} of the given size, in lexicographic order of their
// sorted element lists.
void subsets_of_size(int m, int size, int start, std::uint32_t acc,
                     std::vector<std::uint32_t>& out) {
  if (size == 0) {
    out.push_back(acc);
    return;
  }
  for (int v = start; v <= m - size; ++v) {
    subsets_of_size(m, size - 1, v + 1, acc | (std::uint32_t{1} << v), out);
  }
}

}  // namespace

LinearCode::LinearCode(BitMatrix generator, std::size_t min_distance, std::string label)
    : data_(make_code_data(std::move(generator), min_distance, std::move(label))) {}

LinearCode::LinearCode(std::shared_ptr<const detail::CodeData> data) : data_(std::move(data)) {}

const CodeParams& LinearCode::params() const { return data_->params; }
const BitMatrix& LinearCode::generator() const { return data_->generator; }
const BitMatrix& LinearCode::parity_check() const { return data_->parity_check; }
const std::string& LinearCode::label() const { return data_->label; }
const detail::RmStructure* LinearCode::reed_muller() const { return data_->rm.get(); }
int LinearCode::rm_order() const { return data_->rm ? data_->rm->r : -1; }

LinearCode rm_code(int r, int m) {
  if (m < 0 || m > 20) throw UsageError("rm_code: m must be in [0, 20]");
  if (r < 0 || r > m) {
    throw UsageError("rm_code: order r=" + std::to_string(r) + " must satisfy 0 <= r <= m=" +
                     std::to_string(m));
  }
  const std::size_t n = std::size_t{1} << m;
  std::size_t k = 0;
  for (int i = 0; i <= r; ++i) k += binomial(m, i);

  auto rm = std::make_shared<detail::RmStructure>();
  rm->r = r;
  rm->m = m;
  BitMatrix g(k, n);
  std::size_t row = 0;
  for (int degree = 0; degree <= r; ++degree) {
    std::vector<std::uint32_t> sets;
    subsets_of_size(m, degree, 0, 0, sets);
    for (std::uint32_t s : sets) {
      for (std::size_t j = 0; j < n; ++j) {
        if ((j & s) == s) g.set(row, j);
      }
      detail::RmMonomial mono;
      mono.variables = s;
      mono.degree = static_cast<std::size_t>(degree);
      // Group points by their values on the complement variables.
      const std::uint32_t complement = static_cast<std::uint32_t>(n - 1) & ~s;
      std::vector<std::size_t> group_of(n);
      std::vector<std::uint32_t> keys;
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t key = static_cast<std::uint32_t>(j) & complement;
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it == keys.end()) {
          keys.push_back(key);
          mono.vote_masks.emplace_back(n);
          it = keys.end() - 1;
        }
        mono.vote_masks[static_cast<std::size_t>(it - keys.begin())].set(j);
      }
      rm->monomials.push_back(std::move(mono));
      ++row;
    }
  }

  auto data = make_code_data(std::move(g), std::size_t{1} << (m - r),
                             "RM(" + std::to_string(r) + "," + std::to_string(m) + ")");
  data->rm = std::move(rm);
  return LinearCode(std::move(data));
}

LinearCode repetition_code(std::size_t n) {
  BitMatrix g(1, n);
  for (std::size_t j = 0; j < n; ++j) g.set(0, j);
  return LinearCode(std::move(g), n, "Rep(" + std::to_string(n) + ")");
}

LinearCode linear_code(BitMatrix generator, std::string label) {
  if (generator.rows() > 24) throw UsageError("linear_code: k > 24, cannot enumerate distance");
  if (generator.rows() == 0) throw UsageError("linear_code: empty generator");
  // Gray-code walk over all nonzero codewords.
  BitVector word(generator.cols());
  std::size_t d = generator.cols();
  const std::size_t count = std::size_t{1} << generator.rows();
  for (std::size_t i = 1; i < count; ++i) {
    const auto row = static_cast<std::size_t>(std::countr_zero(i));
    word ^= generator.row(row);
    const std::size_t w = word.weight();
    if (w == 0) throw UsageError("linear_code: generator is rank deficient");
    d = std::min(d, w);
  }
  return LinearCode(std::move(generator), d, std::move(label));
}

BitVector encode(const LinearCode& code, const BitVector& info) {
  if (info.size() != code.k()) {
    throw UsageError("encode " + code.label() + ": info length " + std::to_string(info.size()) +
                     " != k=" + std::to_string(code.k()));
  }
  return vec_mat_mul(info, code.generator());
}

bool is_codeword(const LinearCode& code, const BitVector& word) {
  return !mat_vec_mul(code.parity_check(), word).any();
}

DecodeOutcome DecodeOutcome::make_unique(BitVector codeword, BitVector info, std::size_t distance) {
  return {DecodeStatus::Unique, std::move(codeword), std::move(info), distance};
}

// ---------------------------------------------------------------- Codebook

Codebook build_codebook(const LinearCode& code, std::size_t bound) {
  if (code.k() >= 63 || (std::size_t{1} << code.k()) > bound) {
    throw UsageError("build_codebook " + code.label() + ": 2^" + std::to_string(code.k()) +
                     " codewords exceed the bound of " + std::to_string(bound));
  }
  Codebook cb(code);
  cb.count_ = std::size_t{1} << code.k();
  cb.stride_ = (code.n() + 63) / 64;
  cb.words_.assign(cb.count_ * cb.stride_, 0);
  for (std::size_t i = 1; i < cb.count_; ++i) {
    // word(i) = word(i without its lowest set bit) ^ row(lowest set bit)
    const auto low = static_cast<std::size_t>(std::countr_zero(i));
    const std::size_t prev = i & (i - 1);
    auto row = code.generator().row_words(low);
    for (std::size_t w = 0; w < cb.stride_; ++w) {
      cb.words_[i * cb.stride_ + w] = cb.words_[prev * cb.stride_ + w] ^ row[w];
    }
  }
  if (code.n() <= Codebook::kTableBits && cb.count_ << code.n() <= (std::size_t{1} << 24)) {
    cb.table_.resize(std::size_t{1} << code.n());
    for (std::uint64_t r = 0; r < cb.table_.size(); ++r) {
      const auto best = cb.search(std::span<const std::uint64_t>(&r, 1));
      cb.table_[r] = static_cast<std::uint32_t>(best.index | best.distance << 16 |
                                                (best.tie ? std::size_t{1} << 24 : 0));
    }
  }
  return cb;
}

std::span<const std::uint64_t> Codebook::word_words(std::size_t index) const {
  return {words_.data() + index * stride_, stride_};
}

BitVector Codebook::word(std::size_t index) const {
  if (index >= count_) throw std::out_of_range("codebook index out of range");
  BitVector v(code_.n());
  auto src = word_words(index);
  std::copy(src.begin(), src.end(), v.mutable_words().begin());
  return v;
}

BitVector Codebook::info(std::size_t index) const {
  if (index >= count_) throw std::out_of_range("codebook index out of range");
  BitVector v(code_.k());
  v.mutable_words()[0] = index;
  return v;
}

Codebook::Nearest Codebook::nearest(std::span<const std::uint64_t> received) const {
  if (!table_.empty()) {
    const std::uint32_t e = table_[received[0]];
    return {e & 0xFFFFU, (e >> 16) & 0xFFU, (e >> 24) != 0};
  }
  return search(received);
}

Codebook::Nearest Codebook::search(std::span<const std::uint64_t> received) const {
  Nearest best{0, std::numeric_limits<std::size_t>::max(), false};
  const std::uint64_t* w = words_.data();
  if (stride_ == 1) {
    const std::uint64_t r0 = received[0];
    for (std::size_t i = 0; i < count_; ++i) {
      const auto d = static_cast<std::size_t>(std::popcount(w[i] ^ r0));
      if (d < best.distance) {
        best = {i, d, false};
      } else if (d == best.distance) {
        best.tie = true;
      }
    }
    return best;
  }
  for (std::size_t i = 0; i < count_; ++i, w += stride_) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < stride_; ++j) d += static_cast<std::size_t>(std::popcount(w[j] ^ received[j]));
    if (d < best.distance) {
      best = {i, d, false};
    } else if (d == best.distance) {
      best.tie = true;
    }
  }
  return best;
}

DecodeOutcome ml_decode(const Codebook& codebook, const BitVector& received) {
  if (received.size() != codebook.code().n()) {
    throw UsageError("ml_decode: received length " + std::to_string(received.size()) +
                     " != n=" + std::to_string(codebook.code().n()));
  }
  const auto best = codebook.nearest(received.words());
  if (best.tie) return DecodeOutcome::erasure();
  return DecodeOutcome::make_unique(codebook.word(best.index), codebook.info(best.index),
                                    best.distance);
}

// ---------------------------------------------------------------- Reed decoding

DecodeOutcome reed_decode(const LinearCode& code, const BitVector& received) {
  const auto* rm = code.reed_muller();
  if (rm == nullptr) throw UsageError("reed_decode: " + code.label() + " is not a Reed-Muller code");
  if (received.size() != code.n()) {
    throw UsageError("reed_decode: received length " + std::to_string(received.size()) +
                     " != n=" + std::to_string(code.n()));
  }
  BitVector residual = received;
  BitVector info(code.k());
  // Monomials are stored by ascending degree; walk the degree blocks from the top.
  std::size_t end = rm->monomials.size();
  while (end > 0) {
    const std::size_t degree = rm->monomials[end - 1].degree;
    std::size_t begin = end;
    while (begin > 0 && rm->monomials[begin - 1].degree == degree) --begin;
    for (std::size_t row = begin; row < end; ++row) {
      const auto& mono = rm->monomials[row];
      std::size_t ones = 0;
      for (const auto& mask : mono.vote_masks) {
        auto mw = mask.words();
        auto rw = residual.words();
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < mw.size(); ++i) acc ^= mw[i] & rw[i];
        ones += static_cast<std::size_t>(std::popcount(acc) & 1);
      }
      const std::size_t votes = mono.vote_masks.size();
      if (2 * ones == votes) return DecodeOutcome::failure();
      if (2 * ones > votes) info.set(row);
    }
    for (std::size_t row = begin; row < end; ++row) {
      if (info.test(row)) residual ^= code.generator().row(row);
    }
    end = begin;
  }
  BitVector codeword = encode(code, info);
  const std::size_t distance = hamming_distance(codeword, received);
  if (2 * distance >= code.d()) return DecodeOutcome::failure();
  return DecodeOutcome::make_unique(std::move(codeword), std::move(info), distance);
}

// ---------------------------------------------------------------- HardDecoder

HardDecoder HardDecoder::maximum_likelihood(const LinearCode& code, std::size_t bound) {
  return {Kind::MaximumLikelihood, code, std::make_shared<const Codebook>(build_codebook(code, bound))};
}

HardDecoder HardDecoder::majority_logic(const LinearCode& code) {
  if (!code.is_reed_muller()) {
    throw UsageError("majority-logic decoding needs a Reed-Muller code, got " + code.label());
  }
  return {Kind::MajorityLogic, code, nullptr};
}

HardDecoder HardDecoder::preferred(const LinearCode& code) {
  if (code.is_reed_muller() && code.rm_order() >= 2) return majority_logic(code);
  return maximum_likelihood(code);
}

DecodeOutcome HardDecoder::operator()(const BitVector& received) const {
  if (kind_ == Kind::MajorityLogic) return reed_decode(code_, received);
  return ml_decode(*codebook_, received);
}

// ---------------------------------------------------------------- error-erasure

DecodeOutcome error_erasure_decode(const HardDecoder& decoder, const BitVector& received,
                                   const BitVector& erasures) {
  const LinearCode& code = decoder.code();
  if (received.size() != code.n() || erasures.size() != code.n()) {
    throw UsageError("error_erasure_decode: received/erasure length must equal n=" +
                     std::to_string(code.n()));
  }
  const std::size_t tau = erasures.weight();
  if (tau >= code.d()) return DecodeOutcome::failure();

  const BitVector kept = ~erasures;
  BitVector filled = received & kept;
  for (int fill = 0; fill < 2; ++fill) {
    if (fill == 1) filled |= erasures;
    DecodeOutcome out = decoder(filled);
    if (!out.unique()) continue;
    BitVector diff = out.codeword ^ received;
    diff &= kept;
    const std::size_t errors = diff.weight();
    // Two in-radius candidates would lie closer than d to each other, so the
    // first one accepted is the only one.
    if (2 * errors + tau < code.d()) {
      out.distance = errors;
      return out;
    }
  }
  return DecodeOutcome::failure();
}

}  // namespace pufgcc

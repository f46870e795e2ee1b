#include "pufgcc/bits.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "pufgcc/error.hpp"

namespace pufgcc {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

std::uint64_t low_mask(std::size_t count) {
  return count >= kWordBits ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
}

}  // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t length) : size_(length), words_(words_for(length), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw UsageError("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t length) {
  if (bytes.size() * 8 < length) {
    throw UsageError("byte buffer too short for " + std::to_string(length) + " bits");
  }
  BitVector v(length);
  for (std::size_t b = 0; b < bytes.size() && b * 8 < length; ++b) {
    v.words_[b / 8] |= std::uint64_t{bytes[b]} << (8 * (b % 8));
  }
  v.clear_tail();
  return v;
}

void BitVector::check_index(std::size_t i) const {
  if (i >= size_) {
    throw std::out_of_range("bit index " + std::to_string(i) + " out of range for length " +
                            std::to_string(size_));
  }
}

void BitVector::check_same_size(const BitVector& other) const {
  if (size_ != other.size_) {
    throw UsageError("bit vector length mismatch: " + std::to_string(size_) + " vs " +
                     std::to_string(other.size_));
  }
}

void BitVector::clear_tail() {
  if (size_ % kWordBits != 0) words_.back() &= low_mask(size_ % kWordBits);
}

bool BitVector::test(std::size_t i) const {
  check_index(i);
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
  check_index(i);
  const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= bit;
  } else {
    words_[i / kWordBits] &= ~bit;
  }
}

void BitVector::flip(std::size_t i) {
  check_index(i);
  words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

std::uint64_t BitVector::bits(std::size_t offset, std::size_t count) const {
  if (count > kWordBits || offset + count > size_) {
    throw std::out_of_range("bit range out of range");
  }
  if (count == 0) return 0;
  const std::size_t w = offset / kWordBits;
  const std::size_t s = offset % kWordBits;
  std::uint64_t value = words_[w] >> s;
  if (s != 0 && s + count > kWordBits) value |= words_[w + 1] << (kWordBits - s);
  return value & low_mask(count);
}

void BitVector::set_bits(std::size_t offset, std::size_t count, std::uint64_t value) {
  if (count > kWordBits || offset + count > size_) {
    throw std::out_of_range("bit range out of range");
  }
  if (count == 0) return;
  value &= low_mask(count);
  const std::size_t w = offset / kWordBits;
  const std::size_t s = offset % kWordBits;
  const std::uint64_t mask = low_mask(count);
  words_[w] = (words_[w] & ~(mask << s)) | (value << s);
  if (s != 0 && s + count > kWordBits) {
    const std::size_t spill = kWordBits - s;
    words_[w + 1] = (words_[w + 1] & ~(mask >> spill)) | (value >> spill);
  }
}

BitVector BitVector::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > size_) throw std::out_of_range("slice out of range");
  BitVector out(count);
  for (std::size_t i = 0; i < count; i += kWordBits) {
    const std::size_t len = std::min(kWordBits, count - i);
    out.words_[i / kWordBits] = bits(offset + i, len);
  }
  return out;
}

std::size_t BitVector::weight() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

BitVector& BitVector::operator^=(const BitVector& other) {
  check_same_size(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  check_same_size(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  check_same_size(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVector BitVector::operator~() const {
  BitVector out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_tail();
  return out;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> bytes((size_ + 7) / 8);
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    bytes[b] = static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8)));
  }
  return bytes;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

// ---------------------------------------------------------------- BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * words_for(cols), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows, std::size_t cols) {
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
  std::vector<BitVector> parsed;
  for (auto s : rows) parsed.push_back(BitVector::from_string(s));
  const std::size_t cols = parsed.empty() ? 0 : parsed.front().size();
  return from_rows(parsed, cols);
}

void BitMatrix::check_row(std::size_t r) const {
  if (r >= rows_) {
    throw std::out_of_range("row " + std::to_string(r) + " out of range for " +
                            std::to_string(rows_) + " rows");
  }
}

bool BitMatrix::test(std::size_t r, std::size_t c) const {
  check_row(r);
  if (c >= cols_) throw std::out_of_range("column out of range");
  return (words_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  check_row(r);
  if (c >= cols_) throw std::out_of_range("column out of range");
  const std::uint64_t bit = std::uint64_t{1} << (c % kWordBits);
  auto& w = words_[r * stride_ + c / kWordBits];
  w = value ? (w | bit) : (w & ~bit);
}

BitVector BitMatrix::row(std::size_t r) const {
  check_row(r);
  BitVector v(cols_);
  std::copy_n(words_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_,
              v.mutable_words().begin());
  return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
  check_row(r);
  if (v.size() != cols_) {
    throw UsageError("row length " + std::to_string(v.size()) + " does not match " +
                     std::to_string(cols_) + " columns");
  }
  std::copy(v.words().begin(), v.words().end(),
            words_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
}

std::span<const std::uint64_t> BitMatrix::row_words(std::size_t r) const {
  check_row(r);
  return {words_.data() + r * stride_, stride_};
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src) {
  check_row(dst);
  check_row(src);
  for (std::size_t i = 0; i < stride_; ++i) words_[dst * stride_ + i] ^= words_[src * stride_ + i];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  check_row(a);
  check_row(b);
  if (a == b) return;
  std::swap_ranges(words_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                   words_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                   words_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (test(r, c)) t.set(c, r);
    }
  }
  return t;
}

// ---------------------------------------------------------------- free functions

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) {
    throw UsageError("hamming_distance: length mismatch " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  std::size_t d = 0;
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return d;
}

BitVector mat_vec_mul(const BitMatrix& m, const BitVector& v) {
  if (m.cols() != v.size()) {
    throw UsageError("mat_vec_mul: matrix has " + std::to_string(m.cols()) +
                     " columns, vector has length " + std::to_string(v.size()));
  }
  BitVector out(m.rows());
  auto vw = v.words();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto rw = m.row_words(r);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < rw.size(); ++i) acc ^= rw[i] & vw[i];
    if (std::popcount(acc) & 1) out.set(r);
  }
  return out;
}

BitVector vec_mat_mul(const BitVector& v, const BitMatrix& m) {
  if (m.rows() != v.size()) {
    throw UsageError("vec_mat_mul: matrix has " + std::to_string(m.rows()) +
                     " rows, vector has length " + std::to_string(v.size()));
  }
  BitVector out(m.cols());
  auto ow = out.mutable_words();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!v.test(r)) continue;
    auto rw = m.row_words(r);
    for (std::size_t i = 0; i < rw.size(); ++i) ow[i] ^= rw[i];
  }
  return out;
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("mat_mul: inner dimensions differ");
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) out.set_row(r, vec_mat_mul(a.row(r), b));
  return out;
}

RowEchelon row_reduce(const BitMatrix& m) {
  RowEchelon e{m, {}, 0};
  BitMatrix& a = e.reduced;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
    std::size_t pivot = lead;
    while (pivot < a.rows() && !a.test(pivot, c)) ++pivot;
    if (pivot == a.rows()) continue;
    a.swap_rows(lead, pivot);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r != lead && a.test(r, c)) a.xor_row(r, lead);
    }
    e.pivot_columns.push_back(c);
    ++lead;
  }
  e.rank = lead;
  return e;
}

namespace {

// Index of the first row of g lying in the span of the rows before it, or rows() if none.
std::size_t first_dependent_row(const BitMatrix& g) {
  // Echelon basis kept as (pivot column, vector) pairs; each new row is reduced against it.
  std::vector<std::pair<std::size_t, BitVector>> basis;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    BitVector v = g.row(r);
    for (const auto& [col, b] : basis) {
      if (v.test(col)) v ^= b;
    }
    std::size_t col = 0;
    while (col < v.size() && !v.test(col)) ++col;
    if (col == v.size()) return r;
    basis.emplace_back(col, std::move(v));
  }
  return g.rows();
}

}  // namespace

BitMatrix nullspace_basis(const BitMatrix& g) {
  const RowEchelon e = row_reduce(g);
  if (e.rank < g.rows()) {
    throw UsageError("generator is rank deficient: row " + std::to_string(first_dependent_row(g)) +
                     " is a combination of earlier rows");
  }
  const std::size_t n = g.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivot_columns) is_pivot[c] = true;

  BitMatrix h(n - e.rank, n);
  std::size_t out = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    h.set(out, f);
    for (std::size_t i = 0; i < e.rank; ++i) {
      if (e.reduced.test(i, f)) h.set(out, e.pivot_columns[i]);
    }
    ++out;
  }
  return h;
}

// ---------------------------------------------------------------- SyndromeSolver

SyndromeSolver::SyndromeSolver(const BitMatrix& h) : n_(h.cols()) {
  const std::size_t r = h.rows();
  // Reduce [H | I] on the H columns only; the right block accumulates T.
  BitMatrix aug(r, n_ + r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t c = 0; c < n_; ++c) {
      if (h.test(i, c)) aug.set(i, c);
    }
    aug.set(i, n_ + i);
  }
  std::size_t lead = 0;
  for (std::size_t c = 0; c < n_ && lead < r; ++c) {
    std::size_t pivot = lead;
    while (pivot < r && !aug.test(pivot, c)) ++pivot;
    if (pivot == r) continue;
    aug.swap_rows(lead, pivot);
    for (std::size_t i = 0; i < r; ++i) {
      if (i != lead && aug.test(i, c)) aug.xor_row(i, lead);
    }
    pivots_.push_back(c);
    ++lead;
  }
  if (lead != r) throw UsageError("parity-check matrix is rank deficient");
  transform_ = BitMatrix(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (aug.test(i, n_ + j)) transform_.set(i, j);
    }
  }
}

BitVector SyndromeSolver::solve(const BitVector& syndrome) const {
  const BitVector t = mat_vec_mul(transform_, syndrome);
  BitVector v(n_);
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    if (t.test(i)) v.set(pivots_[i]);
  }
  return v;
}

}  // namespace pufgcc

/**
 * \file bits.hpp
 * \brief Packed vectors and matrices over GF(2).
 *
 * Bit i of a vector lives in word i / 64 at position i % 64. Serialized to
 * bytes, bit i of byte b is vector bit 8*b + i (little-endian within bytes).
 * Bits past the logical length are always zero.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pufgcc {

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length);

  /// Parses a string of '0'/'1' characters; character i becomes bit i.
  static BitVector from_string(std::string_view bits);
  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t length);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const;
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i);

  /// Reads `count` (<= 64) bits starting at `offset` into the low bits of a word.
  std::uint64_t bits(std::size_t offset, std::size_t count) const;
  void set_bits(std::size_t offset, std::size_t count, std::uint64_t value);
  BitVector slice(std::size_t offset, std::size_t count) const;

  std::size_t weight() const;
  bool any() const;

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  BitVector operator~() const;

  bool operator==(const BitVector&) const = default;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;

 private:
  void check_index(std::size_t i) const;
  void check_same_size(const BitVector& other) const;
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense row-major matrix; each row occupies `stride` consecutive words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::span<const BitVector> rows, std::size_t cols);
  static BitMatrix from_strings(std::initializer_list<std::string_view> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool test(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value = true);

  BitVector row(std::size_t r) const;
  void set_row(std::size_t r, const BitVector& v);
  std::span<const std::uint64_t> row_words(std::size_t r) const;

  /// row[dst] ^= row[src]
  void xor_row(std::size_t dst, std::size_t src);
  void swap_rows(std::size_t a, std::size_t b);

  BitMatrix transpose() const;

  bool operator==(const BitMatrix&) const = default;

 private:
  void check_row(std::size_t r) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const BitVector& a, const BitVector& b);

/// M * v, with v read as a column vector.
BitVector mat_vec_mul(const BitMatrix& m, const BitVector& v);

/// v * M, with v read as a row vector: XOR of the rows selected by v.
BitVector vec_mat_mul(const BitVector& v, const BitMatrix& m);

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);

struct RowEchelon {
  BitMatrix reduced;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank = 0;
};

/// Reduced row-echelon form by Gauss-Jordan elimination.
RowEchelon row_reduce(const BitMatrix& m);

/// Basis H of the right nullspace of a full-row-rank G, so that G * H^T = 0.
/// One row per non-pivot column of rref(G). Throws UsageError naming the first
/// row of G that depends on earlier rows.
BitMatrix nullspace_basis(const BitMatrix& g);

/// Finds particular solutions v of H v = s for a fixed full-row-rank H.
/// Free (non-pivot) coordinates of v are zero.
class SyndromeSolver {
 public:
  SyndromeSolver() = default;
  explicit SyndromeSolver(const BitMatrix& h);

  BitVector solve(const BitVector& syndrome) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> pivots_;
  BitMatrix transform_;  // T with T * H = rref(H)
};

}  // namespace pufgcc

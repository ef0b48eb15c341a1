#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace locinv {

/// Dense bit vector over GF(2), packed 64 bits per word, bit i in word i/64.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  BitVec& operator&=(const BitVec& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }

  bool any() const {
    for (auto w : words_) {
      if (w != 0) return true;
    }
    return false;
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Index of the lowest set bit, or size() when the vector is zero.
  std::size_t first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return size_;
  }

  /// Parity of the bitwise AND with `other` (the GF(2) inner product).
  bool dot(const BitVec& other) const {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BitVec&, const BitVec&) = default;

  /// Bits as '0'/'1' characters, index 0 first.
  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense GF(2) matrix stored row-major, each row a packed word run.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n);
  /// Parses rows of '0'/'1' characters; whitespace inside a row is ignored.
  static BitMatrix from_rows(const std::vector<std::string>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v = true) {
    auto& w = words_[r * stride_ + (c >> 6)];
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    w = v ? (w | mask) : (w & ~mask);
  }

  std::span<std::uint64_t> row(std::size_t r) { return {words_.data() + r * stride_, stride_}; }
  std::span<const std::uint64_t> row(std::size_t r) const {
    return {words_.data() + r * stride_, stride_};
  }
  void xor_row(std::size_t dst, std::size_t src) {
    auto* d = words_.data() + dst * stride_;
    const auto* s = words_.data() + src * stride_;
    for (std::size_t w = 0; w < stride_; ++w) d[w] ^= s[w];
  }
  void swap_rows(std::size_t a, std::size_t b);

  BitVec row_vec(std::size_t r) const;
  BitVec col_vec(std::size_t c) const;
  void set_row(std::size_t r, const BitVec& v);
  void set_col(std::size_t c, const BitVec& v);

  BitMatrix transpose() const;
  BitVec operator*(const BitVec& v) const;
  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend BitMatrix operator+(const BitMatrix& a, const BitMatrix& b);

  bool is_zero() const;
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  /// Plain-text 0/1 grid, one row per line.
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Rank over GF(2) by Gaussian elimination.
std::size_t gf2_rank(BitMatrix m);

/// One solution of A x = b over GF(2), or nullopt when the system is inconsistent.
std::optional<BitVec> gf2_solve(const BitMatrix& a, const BitVec& b);

BitMatrix matrix_power(const BitMatrix& m, std::uint64_t e);

/// Incrementally maintained echelon basis. Every accepted vector gets an index
/// (0, 1, ...) and reductions report which accepted vectors were combined.
class LinearBasis {
 public:
  explicit LinearBasis(std::size_t dimension, bool track_combinations = true)
      : dimension_(dimension), track_(track_combinations) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t rank() const { return rows_.size(); }

  /// Adds `v` if it is independent of the current span; returns whether it was added.
  bool insert(const BitVec& v);

  /// Coordinates of `v` with respect to the accepted vectors, if `v` lies in the span.
  std::optional<BitVec> express(const BitVec& v) const;

  bool contains(const BitVec& v) const;

 private:
  // Reduces v in place; combo (if tracked) collects the accepted vectors used.
  void reduce(BitVec& v, BitVec* combo) const;

  std::size_t dimension_;
  bool track_;
  std::vector<BitVec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<BitVec> combos_;
};

}  // namespace locinv

#include "locinv/bitvec.hpp"

#include <stdexcept>
#include <utility>

namespace locinv {

std::string BitVec::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string>& rows) {
  std::vector<std::string> clean;
  clean.reserve(rows.size());
  for (const auto& r : rows) {
    std::string c;
    for (char ch : r) {
      if (ch == '0' || ch == '1') {
        c.push_back(ch);
      } else if (ch != ' ' && ch != '\t') {
        throw std::invalid_argument("matrix row contains a character other than 0/1");
      }
    }
    clean.push_back(std::move(c));
  }
  const std::size_t cols = clean.empty() ? 0 : clean.front().size();
  BitMatrix m(clean.size(), cols);
  for (std::size_t r = 0; r < clean.size(); ++r) {
    if (clean[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, clean[r][c] == '1');
  }
  return m;
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  auto* pa = words_.data() + a * stride_;
  auto* pb = words_.data() + b * stride_;
  for (std::size_t w = 0; w < stride_; ++w) std::swap(pa[w], pb[w]);
}

BitVec BitMatrix::row_vec(std::size_t r) const {
  BitVec v(cols_);
  auto src = row(r);
  auto dst = v.words();
  for (std::size_t w = 0; w < stride_; ++w) dst[w] = src[w];
  return v;
}

BitVec BitMatrix::col_vec(std::size_t c) const {
  BitVec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (get(r, c)) v.set(r);
  }
  return v;
}

void BitMatrix::set_row(std::size_t r, const BitVec& v) {
  auto dst = row(r);
  auto src = v.words();
  for (std::size_t w = 0; w < stride_; ++w) dst[w] = src[w];
}

void BitMatrix::set_col(std::size_t c, const BitVec& v) {
  for (std::size_t r = 0; r < rows_; ++r) set(r, c, v.get(r));
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto src = row(r);
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t word = src[w];
      while (word != 0) {
        const int b = std::countr_zero(word);
        t.set(w * 64 + static_cast<std::size_t>(b), r);
        word &= word - 1;
      }
    }
  }
  return t;
}

BitVec BitMatrix::operator*(const BitVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
  BitVec out(rows_);
  auto vw = v.words();
  for (std::size_t r = 0; r < rows_; ++r) {
    auto rw = row(r);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < stride_; ++w) acc ^= rw[w] & vw[w];
    if (std::popcount(acc) & 1) out.set(r);
  }
  return out;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  BitMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto arow = a.row(i);
    auto* crow = c.words_.data() + i * c.stride_;
    for (std::size_t w = 0; w < a.stride_; ++w) {
      std::uint64_t word = arow[w];
      while (word != 0) {
        const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        const auto* brow = b.words_.data() + k * b.stride_;
        for (std::size_t x = 0; x < c.stride_; ++x) crow[x] ^= brow[x];
        word &= word - 1;
      }
    }
  }
  return c;
}

BitMatrix operator+(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw std::invalid_argument("matrix sum dimension mismatch");
  }
  BitMatrix c = a;
  for (std::size_t i = 0; i < c.words_.size(); ++i) c.words_[i] ^= b.words_[i];
  return c;
}

bool BitMatrix::is_zero() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::string BitMatrix::to_string() const {
  std::string s;
  s.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) s.push_back(get(r, c) ? '1' : '0');
    s.push_back('\n');
  }
  return s;
}

std::size_t gf2_rank(BitMatrix m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && !m.get(pivot, c)) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (m.get(r, c)) m.xor_row(r, rank);
    }
    ++rank;
  }
  return rank;
}

std::optional<BitVec> gf2_solve(const BitMatrix& a, const BitVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("right-hand side size mismatch");
  const std::size_t n = a.cols();
  BitMatrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto src = a.row(r);
    auto dst = aug.row(r);
    for (std::size_t w = 0; w < src.size(); ++w) dst[w] = src[w];
    aug.set(r, n, b.get(r));
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < aug.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < aug.rows() && !aug.get(pivot, c)) ++pivot;
    if (pivot == aug.rows()) continue;
    aug.swap_rows(rank, pivot);
    for (std::size_t r = 0; r < aug.rows(); ++r) {
      if (r != rank && aug.get(r, c)) aug.xor_row(r, rank);
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < aug.rows(); ++r) {
    if (aug.get(r, n)) return std::nullopt;
  }
  BitVec x(n);
  for (std::size_t i = 0; i < rank; ++i) x.set(pivot_cols[i], aug.get(i, n));
  return x;
}

BitMatrix matrix_power(const BitMatrix& m, std::uint64_t e) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix power needs a square matrix");
  BitMatrix result = BitMatrix::identity(m.rows());
  BitMatrix base = m;
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

void LinearBasis::reduce(BitVec& v, BitVec* combo) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (v.get(pivots_[k])) {
      v ^= rows_[k];
      if (combo != nullptr) *combo ^= combos_[k];
    }
  }
}

bool LinearBasis::insert(const BitVec& v) {
  if (v.size() != dimension_) throw std::invalid_argument("basis vector size mismatch");
  BitVec r = v;
  BitVec combo;
  if (track_) combo = BitVec(dimension_ + 1);
  reduce(r, track_ ? &combo : nullptr);
  const std::size_t pivot = r.first_set();
  if (pivot == r.size()) return false;
  if (track_) combo.flip(rows_.size());
  rows_.push_back(std::move(r));
  pivots_.push_back(pivot);
  if (track_) combos_.push_back(std::move(combo));
  return true;
}

std::optional<BitVec> LinearBasis::express(const BitVec& v) const {
  if (!track_) throw std::logic_error("basis was built without combination tracking");
  BitVec r = v;
  BitVec combo(dimension_ + 1);
  reduce(r, &combo);
  if (r.any()) return std::nullopt;
  BitVec out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) out.set(i, combo.get(i));
  return out;
}

bool LinearBasis::contains(const BitVec& v) const {
  BitVec r = v;
  reduce(r, nullptr);
  return r.none();
}

}  // namespace locinv

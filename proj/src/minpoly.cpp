#include "locinv/minpoly.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace locinv {

IterSequence::IterSequence(MapView map, Point y) : map_(std::move(map)), y_(y) {
  if (y.dimension() != map_.dimension()) {
    throw std::invalid_argument("point dimension does not match the map");
  }
  terms_.push_back(y.code());
}

void IterSequence::extend_to(std::size_t len) const {
  std::lock_guard lock(*mu_);
  if (terms_.size() >= len) return;
  const std::size_t target = std::max(len, 2 * terms_.size());
  terms_.reserve(target);
  while (terms_.size() < target) terms_.push_back(map_.step(terms_.back()));
}

std::uint64_t IterSequence::at(std::size_t k) const {
  extend_to(k + 1);
  std::lock_guard lock(*mu_);
  return terms_[k];
}

std::vector<std::uint64_t> IterSequence::prefix(std::size_t len) const {
  extend_to(len);
  std::lock_guard lock(*mu_);
  return {terms_.begin(), terms_.begin() + static_cast<std::ptrdiff_t>(len)};
}

std::size_t IterSequence::cached() const {
  std::lock_guard lock(*mu_);
  return terms_.size();
}

IterSequence generate_sequence(const MapView& map, const Point& y, std::size_t len) {
  if (len < 1) throw std::invalid_argument("sequence length must be positive");
  IterSequence s(map, y);
  s.prefix(len);
  return s;
}

namespace {

void put_point(BitMatrix& mat, std::size_t row0, std::size_t col, std::uint64_t code, int n) {
  for (int i = 0; i < n; ++i) {
    if ((code >> (n - 1 - i)) & 1u) mat.set(row0 + static_cast<std::size_t>(i), col);
  }
}

BlockHankel hankel_from(const std::vector<std::uint64_t>& s, int n, int m, int j) {
  BlockHankel h;
  h.m = m;
  h.j = j;
  const auto rows = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  h.bits = BitMatrix(rows, static_cast<std::size_t>(m));
  h.rhs = BitVec(rows);
  for (int r = 0; r < m; ++r) {
    const std::size_t row0 = static_cast<std::size_t>(r) * static_cast<std::size_t>(n);
    for (int c = 0; c < m; ++c) {
      put_point(h.bits, row0, static_cast<std::size_t>(c), s[static_cast<std::size_t>(r + c + j)], n);
    }
    const std::uint64_t v = s[static_cast<std::size_t>(r + m + j)];
    for (int i = 0; i < n; ++i) {
      if ((v >> (n - 1 - i)) & 1u) h.rhs.set(row0 + static_cast<std::size_t>(i));
    }
  }
  return h;
}

}  // namespace

BlockHankel build_hankel(const IterSequence& seq, int m, int j) {
  if (m < 1 || j < 0) throw std::invalid_argument("Hankel order must be >= 1 and shift >= 0");
  const auto s = seq.prefix(static_cast<std::size_t>(2 * m + j));
  return hankel_from(s, seq.dimension(), m, j);
}

std::vector<bool> MinimalPolyResult::alpha() const {
  std::vector<bool> a(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) a[static_cast<std::size_t>(i)] = poly.coeff(static_cast<std::size_t>(i));
  return a;
}

std::string MinimalPolyResult::to_string() const {
  std::ostringstream os;
  os << "m(X) = " << poly.to_string() << ", degree " << degree << ", order ";
  if (order) {
    os << *order;
  } else {
    os << "none";
  }
  return os.str();
}

std::optional<MinimalPolyResult> minimal_polynomial(const IterSequence& seq,
                                                    const MinpolyOptions& opts) {
  if (opts.max_degree < 1 || opts.shifts < 1) {
    throw std::invalid_argument("max degree and shift depth must be positive");
  }
  const int n = seq.dimension();
  if (seq.at(0) == 0 && seq.at(1) == 0) {
    MinimalPolyResult r;
    r.poly = Gf2Poly::one();
    r.degree = 0;
    r.order = 1;
    r.zero_sequence = true;
    return r;
  }
  for (int m = std::max(opts.m0, 1); m <= opts.max_degree; ++m) {
    std::vector<int> shifts;
    for (int j = 1; j <= opts.shifts; ++j) shifts.push_back(j);
    std::mt19937_64 rng(seq.start().code() * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(m));
    for (int k = 0; k < opts.random_shifts; ++k) {
      shifts.push_back(opts.shifts + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * m + 8)));
    }
    const int max_shift = *std::max_element(shifts.begin(), shifts.end());
    const auto s = seq.prefix(static_cast<std::size_t>(2 * m + max_shift));

    const BlockHankel h0 = hankel_from(s, n, m, 0);
    const std::size_t rank = gf2_rank(h0.bits);
    if (rank != static_cast<std::size_t>(m)) continue;
    const auto alpha = gf2_solve(h0.bits, h0.rhs);
    if (!alpha) continue;

    bool ok = true;
    std::size_t min_shifted = rank;
    for (int j : shifts) {
      const BlockHankel hj = hankel_from(s, n, m, j);
      const std::size_t rj = gf2_rank(hj.bits);
      min_shifted = std::min(min_shifted, rj);
      if (rj != static_cast<std::size_t>(m) || !(hj.bits * *alpha == hj.rhs)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    MinimalPolyResult r;
    r.poly = Gf2Poly::monomial(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      if (alpha->get(static_cast<std::size_t>(i))) r.poly.set_coeff(static_cast<std::size_t>(i), true);
    }
    r.degree = m;
    r.rank = rank;
    r.shifted_rank = min_shifted;
    if (r.poly.constant_term()) {
      try {
        r.order = poly_order(r.poly);
      } catch (const std::overflow_error& e) {
        diagnostic("order of " + r.poly.to_string() + " left unset: " + e.what());
      }
    }
    return r;
  }
  return std::nullopt;
}

std::optional<MinimalPolyResult> minimal_polynomial(const MapView& map, const Point& y,
                                                    const MinpolyOptions& opts) {
  return minimal_polynomial(IterSequence(map, y), opts);
}

Point solve_in_orbit(const IterSequence& seq, const MinimalPolyResult& mp) {
  const int n = seq.dimension();
  if (mp.zero_sequence) return Point::zero(n);
  if (!mp.poly.constant_term()) {
    throw std::invalid_argument("orbit solution needs a minimal polynomial with alpha_0 = 1");
  }
  const int m = mp.degree;
  std::uint64_t x = seq.at(static_cast<std::size_t>(m - 1));
  for (int i = 1; i < m; ++i) {
    if (mp.poly.coeff(static_cast<std::size_t>(i))) x ^= seq.at(static_cast<std::size_t>(i - 1));
  }
  return Point(n, x);
}

}  // namespace locinv

#include "locinv/koopman.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace locinv {

FuncVec coordinate_function(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("coordinate index out of range");
  FuncVec f(std::size_t{1} << n);
  const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    if (x & bit) f.set(x);
  }
  return f;
}

FuncVec dual_apply(const TableMap& map, const FuncVec& f) {
  if (f.size() != map.size()) throw std::invalid_argument("function size does not match the map");
  FuncVec g(f.size());
  auto out = g.words();
  const auto& t = map.table();
  for (std::size_t w = 0; w < out.size(); ++w) {
    std::uint64_t acc = 0;
    const std::size_t base = w * 64;
    const std::size_t lim = std::min<std::size_t>(64, f.size() - base);
    for (std::size_t b = 0; b < lim; ++b) acc |= std::uint64_t{f.get(t[base + b])} << b;
    out[w] = acc;
  }
  return g;
}

BitVec KoopmanRep::embed(std::uint64_t x) const {
  BitVec v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) v.set(i, basis[i].get(x));
  return v;
}

KoopmanRep build_invariant_space(const TableMap& map, const std::vector<int>& order) {
  const int n = map.dimension();
  if (n > limits().koopman) {
    throw std::length_error("n=" + std::to_string(n) + " exceeds the Koopman limit " +
                            std::to_string(limits().koopman));
  }
  std::vector<int> seq = order;
  if (seq.empty()) {
    for (int i = 0; i < n; ++i) seq.push_back(i);
  }
  {
    auto sorted = seq;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) {
      if (sorted.size() != static_cast<std::size_t>(n) || sorted[static_cast<std::size_t>(i)] != i) {
        throw std::invalid_argument("accumulation order must be a permutation of the coordinates");
      }
    }
  }

  const std::size_t size = map.size();
  LinearBasis acc(size);
  KoopmanRep rep;
  rep.n = n;
  // Images that closed a chain, with the index of the basis vector they came from.
  std::vector<std::pair<std::size_t, FuncVec>> chain_ends;
  for (int i : seq) {
    FuncVec v = coordinate_function(n, i);
    bool grew = false;
    while (acc.insert(v)) {
      rep.basis.push_back(v);
      v = dual_apply(map, v);
      grew = true;
    }
    if (grew) chain_ends.emplace_back(rep.basis.size() - 1, std::move(v));
  }

  const std::size_t N = rep.basis.size();
  rep.K = BitMatrix(N, N);
  std::vector<bool> is_end(N, false);
  for (const auto& [idx, image] : chain_ends) {
    is_end[idx] = true;
    const auto coords = acc.express(image);
    if (!coords) throw std::logic_error("chain image left the accumulated span");
    for (std::size_t j = 0; j < N; ++j) {
      if (coords->get(j)) rep.K.set(j, idx);
    }
  }
  for (std::size_t idx = 0; idx < N; ++idx) {
    if (!is_end[idx]) rep.K.set(idx + 1, idx);
  }

  for (int i = 0; i < n; ++i) {
    auto c = acc.express(coordinate_function(n, i));
    if (!c) throw std::logic_error("coordinate function outside the invariant space");
    rep.coord_coeffs.push_back(std::move(*c));
  }

  // Embedding check on every point: row x of Psi is psi(x); Psi_F (row x = psi(F(x)))
  // must equal Psi K.
  BitMatrix psi(size, N);
  for (std::size_t j = 0; j < N; ++j) {
    const auto& b = rep.basis[j];
    for (std::uint64_t x = 0; x < size; ++x) {
      if (b.get(x)) psi.set(x, j);
    }
  }
  const BitMatrix lhs = psi * rep.K;
  for (std::uint64_t x = 0; x < size; ++x) {
    const auto a = lhs.row(x);
    const auto b = psi.row(map(x));
    if (!std::equal(a.begin(), a.end(), b.begin())) {
      throw std::logic_error("Koopman embedding identity failed");
    }
  }
  return rep;
}

KoopmanRep build_invariant_space(const PolyMap& map, const std::vector<int>& order) {
  if (map.dimension() > limits().koopman) {
    throw std::length_error("n=" + std::to_string(map.dimension()) + " exceeds the Koopman limit " +
                            std::to_string(limits().koopman));
  }
  return build_invariant_space(compile_table(map), order);
}

bool is_permutation(const KoopmanRep& rep) { return gf2_rank(rep.K) == rep.dimension(); }

Gf2Poly characteristic_polynomial(const BitMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("characteristic polynomial needs a square matrix");
  const std::size_t N = input.rows();
  BitMatrix a = input;
  BitVec mask(N);
  for (std::size_t k = 0; k + 2 < N; ++k) {
    std::size_t piv = k + 1;
    while (piv < N && !a.get(piv, k)) ++piv;
    if (piv == N) continue;
    if (piv != k + 1) {
      a.swap_rows(piv, k + 1);
      for (std::size_t r = 0; r < N; ++r) {
        const bool u = a.get(r, piv), v = a.get(r, k + 1);
        a.set(r, piv, v);
        a.set(r, k + 1, u);
      }
    }
    // Clear column k below the subdiagonal: rows q += row k+1, then the inverse
    // transform adds columns q to column k+1.
    mask = BitVec(N);
    bool any = false;
    for (std::size_t q = k + 2; q < N; ++q) {
      if (a.get(q, k)) {
        mask.set(q);
        a.xor_row(q, k + 1);
        any = true;
      }
    }
    if (!any) continue;
    const auto mw = mask.words();
    for (std::size_t r = 0; r < N; ++r) {
      const auto row = a.row(r);
      std::uint64_t par = 0;
      for (std::size_t w = 0; w < mw.size(); ++w) par ^= row[w] & mw[w];
      if (std::popcount(par) & 1) a.set(r, k + 1, !a.get(r, k + 1));
    }
  }
  // p_k = (X + h_kk) p_{k-1} + sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}, 1-based.
  std::vector<Gf2Poly> p(N + 1);
  p[0] = Gf2Poly::one();
  for (std::size_t k = 1; k <= N; ++k) {
    Gf2Poly cur = p[k - 1].shifted(1);
    if (a.get(k - 1, k - 1)) cur += p[k - 1];
    for (std::size_t i = k - 1; i >= 1; --i) {
      // prod over j = i+1..k of h_{j,j-1}
      if (!a.get(i, i - 1)) break;
      if (a.get(i - 1, k - 1)) cur += p[i - 1];
    }
    p[k] = std::move(cur);
  }
  return p[N];
}

BitMatrix poly_eval(const Gf2Poly& p, const BitMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("poly_eval needs a square matrix");
  const std::size_t N = a.rows();
  const int d = p.degree();
  if (d < 0) return BitMatrix(N, N);
  // Paterson-Stockmeyer: powers a^0..a^s, then Horner in a^s.
  const int s = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d + 1))));
  std::vector<BitMatrix> pw{BitMatrix::identity(N)};
  for (int i = 1; i <= s; ++i) pw.push_back(pw.back() * a);
  const BitMatrix& as = pw[static_cast<std::size_t>(s)];
  BitMatrix result(N, N);
  for (int top = (d / s) * s; top >= 0; top -= s) {
    BitMatrix chunk(N, N);
    for (int i = 0; i < s && top + i <= d; ++i) {
      if (p.coeff(static_cast<std::size_t>(top + i))) chunk = chunk + pw[static_cast<std::size_t>(i)];
    }
    result = result * as + chunk;
  }
  return result;
}

int ElementaryDivisors::invertible_minpoly_degree() const {
  std::map<Gf2Poly, int, bool (*)(const Gf2Poly&, const Gf2Poly&)> top(
      [](const Gf2Poly& a, const Gf2Poly& b) { return a < b; });
  for (const auto& b : blocks) {
    auto& e = top[b.poly];
    e = std::max(e, b.exponent);
  }
  int d = 0;
  for (const auto& [p, e] : top) d += p.degree() * e;
  return d;
}

std::string ElementaryDivisors::to_string() const {
  std::string s;
  for (const auto& b : blocks) {
    if (!s.empty()) s += ' ';
    s += '(' + b.poly.to_string() + ")^" + std::to_string(b.exponent);
  }
  if (nilpotent_dimension > 0) {
    if (!s.empty()) s += ' ';
    s += "X^" + std::to_string(nilpotent_dimension);
  }
  return s.empty() ? "1" : s;
}

ElementaryDivisors elementary_divisors(const BitMatrix& K) {
  if (K.rows() != K.cols()) throw std::invalid_argument("elementary divisors need a square matrix");
  const std::size_t N = K.rows();
  ElementaryDivisors out;
  if (N == 0) return out;

  // Image of K^(2^s) with 2^s >= N is the invertible (Fitting) component.
  BitMatrix P = K;
  for (std::size_t reach = 1; reach < N; reach *= 2) P = P * P;
  const BitMatrix Pt = P.transpose();
  LinearBasis img(N);
  std::vector<BitVec> b;
  for (std::size_t c = 0; c < N; ++c) {
    BitVec col = Pt.row_vec(c);
    if (img.insert(col)) b.push_back(std::move(col));
  }
  const std::size_t r = b.size();
  out.invertible_dimension = static_cast<int>(r);
  out.nilpotent_dimension = static_cast<int>(N - r);
  if (r == 0) return out;

  BitMatrix kinv(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto coords = img.express(K * b[i]);
    if (!coords) throw std::logic_error("invertible component is not K-invariant");
    for (std::size_t j = 0; j < r; ++j) {
      if (coords->get(j)) kinv.set(j, i);
    }
  }

  const Gf2Poly chi = characteristic_polynomial(kinv);
  for (const auto& f : factor(chi)) {
    const int d = f.poly.degree();
    if (f.exponent == 1) {
      out.blocks.push_back({f.poly, 1});
      continue;
    }
    // k_j = dim ker p(K)^j; (k_j - k_{j-1}) / d blocks have exponent >= j.
    const BitMatrix A = poly_eval(f.poly, kinv);
    BitMatrix Aj = A;
    std::vector<int> at_least{0};
    int prev = 0;
    const int full = f.exponent * d;
    for (int j = 1;; ++j) {
      if (j > 1) Aj = Aj * A;
      const int kj = static_cast<int>(r - gf2_rank(Aj));
      at_least.push_back((kj - prev) / d);
      prev = kj;
      if (kj >= full) break;
      if (j >= f.exponent) throw std::logic_error("kernel dimensions failed to reach the multiplicity");
    }
    at_least.push_back(0);
    for (std::size_t j = 1; j + 1 < at_least.size(); ++j) {
      for (int c = at_least[j] - at_least[j + 1]; c > 0; --c) {
        out.blocks.push_back({f.poly, static_cast<int>(j)});
      }
    }
  }
  std::sort(out.blocks.begin(), out.blocks.end(), [](const PolyFactor& a, const PolyFactor& b) {
    if (!(a.poly == b.poly)) return a.poly < b.poly;
    return a.exponent < b.exponent;
  });
  return out;
}

bool PeriodSet::contains(std::uint64_t p) const {
  return std::binary_search(periods.begin(), periods.end(), p);
}

std::string PeriodSet::to_string() const {
  std::string s;
  for (auto p : periods) {
    if (!s.empty()) s += ',';
    s += std::to_string(p);
  }
  return s;
}

PeriodSet period_set(const ElementaryDivisors& div, bool lcm_closure) {
  constexpr std::size_t kMaxSize = 1u << 16;
  std::set<std::uint64_t> base{1};
  for (const auto& b : div.blocks) {
    const std::uint64_t t = poly_order(b.poly);
    for (int j = 1; j <= b.exponent; ++j) {
      const unsigned shift = j <= 1 ? 0u : static_cast<unsigned>(std::bit_width(static_cast<unsigned>(j - 1)));
      if (shift >= 64 || (shift > 0 && (t >> (64 - shift)) != 0)) {
        throw std::overflow_error("period exceeds 64 bits");
      }
      base.insert(t << shift);
    }
  }
  PeriodSet ps;
  ps.lcm_closed = lcm_closure;
  if (!lcm_closure) {
    ps.periods.assign(base.begin(), base.end());
    return ps;
  }
  std::set<std::uint64_t> closed{1};
  for (auto t : base) {
    if (closed.count(t)) continue;
    std::vector<std::uint64_t> add;
    for (auto s : closed) {
      std::uint64_t l = 0;
      if (!checked_lcm(s, t, l)) {
        ps.truncated = true;
        continue;
      }
      add.push_back(l);
    }
    closed.insert(add.begin(), add.end());
    if (closed.size() > kMaxSize) {
      ps.truncated = true;
      break;
    }
  }
  ps.periods.assign(closed.begin(), closed.end());
  return ps;
}

}  // namespace locinv

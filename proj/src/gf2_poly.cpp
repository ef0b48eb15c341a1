#include "locinv/gf2_poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace locinv {

namespace {

using u128 = unsigned __int128;

// Spreads the 32 low bits of x so that bit i lands at bit 2i.
std::uint64_t spread_bits(std::uint64_t x) {
  x &= 0xFFFFFFFFull;
  x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
  x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
  x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x << 2)) & 0x3333333333333333ull;
  x = (x | (x << 1)) & 0x5555555555555555ull;
  return x;
}

// Inverse of spread_bits: gathers the even bits of x into the low 32 bits.
std::uint64_t gather_even_bits(std::uint64_t x) {
  x &= 0x5555555555555555ull;
  x = (x | (x >> 1)) & 0x3333333333333333ull;
  x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x >> 4)) & 0x00FF00FF00FF00FFull;
  x = (x | (x >> 8)) & 0x0000FFFF0000FFFFull;
  x = (x | (x >> 16)) & 0x00000000FFFFFFFFull;
  return x;
}

// dst ^= src << shift, where dst is long enough.
void xor_shifted(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src,
                 std::size_t shift) {
  const std::size_t off = shift >> 6;
  const unsigned s = static_cast<unsigned>(shift & 63);
  if (s == 0) {
    for (std::size_t j = 0; j < src.size(); ++j) dst[j + off] ^= src[j];
    return;
  }
  for (std::size_t j = 0; j < src.size(); ++j) {
    dst[j + off] ^= src[j] << s;
    const std::uint64_t carry = src[j] >> (64 - s);
    if (carry != 0) dst[j + off + 1] ^= carry;
  }
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1u) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull,
                          37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull,
                          37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t pollard_brent(std::uint64_t n) {
  if ((n & 1u) == 0) return 2;
  std::mt19937_64 rng(n);
  while (true) {
    const std::uint64_t c = rng() % (n - 1) + 1;
    std::uint64_t y = rng() % n;
    std::uint64_t g = 1;
    std::uint64_t q = 1;
    std::uint64_t x = 0;
    std::uint64_t ys = 0;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

// Splits a squarefree polynomial into (product of degree-d irreducibles, d) pieces.
std::vector<std::pair<Gf2Poly, int>> distinct_degree(Gf2Poly f) {
  std::vector<std::pair<Gf2Poly, int>> out;
  Gf2Poly h = Gf2Poly::x() % f;
  for (int i = 1; f.degree() >= 2 * i; ++i) {
    h = mulmod(h, h, f);
    Gf2Poly g = gcd(f, h + Gf2Poly::x());
    if (!g.is_one()) {
      out.emplace_back(g, i);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

void equal_degree(const Gf2Poly& g, int d, std::mt19937_64& rng, std::vector<Gf2Poly>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  const int n = g.degree();
  while (true) {
    Gf2Poly a;
    for (int i = 0; i < n; ++i) {
      if (rng() & 1u) a.set_coeff(static_cast<std::size_t>(i), true);
    }
    if (a.degree() < 1) continue;
    Gf2Poly t = a;
    Gf2Poly power = a;
    for (int i = 1; i < d; ++i) {
      power = mulmod(power, power, g);
      t += power;
    }
    Gf2Poly h = gcd(g, t);
    if (h.degree() > 0 && h.degree() < n) {
      equal_degree(h, d, rng, out);
      equal_degree(g / h, d, rng, out);
      return;
    }
  }
}

// Squarefree decomposition: pairs (squarefree part, multiplicity).
void squarefree(const Gf2Poly& f, int mult, std::vector<std::pair<Gf2Poly, int>>& out) {
  if (f.degree() <= 0) return;
  Gf2Poly d = derivative(f);
  if (d.is_zero()) {
    squarefree(square_root(f), mult * 2, out);
    return;
  }
  Gf2Poly c = gcd(f, d);
  Gf2Poly w = f / c;
  int i = 1;
  while (!w.is_one()) {
    Gf2Poly y = gcd(w, c);
    Gf2Poly z = w / y;
    if (!z.is_one()) out.emplace_back(z, i * mult);
    ++i;
    w = y;
    c = c / y;
  }
  if (!c.is_one()) squarefree(square_root(c), mult * 2, out);
}

}  // namespace

Gf2Poly Gf2Poly::monomial(std::size_t degree) {
  Gf2Poly p;
  p.set_coeff(degree, true);
  return p;
}

Gf2Poly Gf2Poly::from_exponents(std::initializer_list<std::size_t> exps) {
  Gf2Poly p;
  for (auto e : exps) p.set_coeff(e, !p.coeff(e));
  return p;
}

Gf2Poly Gf2Poly::from_exponents(const std::vector<std::size_t>& exps) {
  Gf2Poly p;
  for (auto e : exps) p.set_coeff(e, !p.coeff(e));
  return p;
}

Gf2Poly Gf2Poly::from_uint(std::uint64_t bits) {
  Gf2Poly p;
  if (bits != 0) p.words_.push_back(bits);
  return p;
}

Gf2Poly Gf2Poly::from_words(std::vector<std::uint64_t> words) {
  Gf2Poly p;
  p.words_ = std::move(words);
  p.trim();
  return p;
}

Gf2Poly Gf2Poly::from_coefficients(const std::vector<int>& coeffs) {
  Gf2Poly p;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] & 1) p.set_coeff(i, true);
  }
  return p;
}

Gf2Poly Gf2Poly::parse(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  Gf2Poly p;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    if (next == std::string::npos) next = s.size();
    const std::string term = s.substr(pos, next - pos);
    if (term == "0") {
      // contributes nothing
    } else if (term == "1") {
      p.set_coeff(0, !p.coeff(0));
    } else if (term == "X" || term == "x") {
      p.set_coeff(1, !p.coeff(1));
    } else if (term.size() > 2 && (term[0] == 'X' || term[0] == 'x') && term[1] == '^') {
      std::size_t used = 0;
      const unsigned long long e = std::stoull(term.substr(2), &used);
      if (used != term.size() - 2) throw std::invalid_argument("bad exponent in '" + term + "'");
      p.set_coeff(e, !p.coeff(e));
    } else {
      throw std::invalid_argument("bad polynomial term '" + term + "'");
    }
    pos = next + 1;
  }
  return p;
}

int Gf2Poly::degree() const {
  if (words_.empty()) return -1;
  return static_cast<int>((words_.size() - 1) * 64 + 63 -
                          static_cast<std::size_t>(std::countl_zero(words_.back())));
}

void Gf2Poly::set_coeff(std::size_t i, bool v) {
  const std::size_t w = i >> 6;
  if (w >= words_.size()) {
    if (!v) return;
    words_.resize(w + 1, 0);
  }
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  words_[w] = v ? (words_[w] | mask) : (words_[w] & ~mask);
  trim();
}

void Gf2Poly::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

Gf2Poly& Gf2Poly::operator+=(const Gf2Poly& other) {
  if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
  for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] ^= other.words_[i];
  trim();
  return *this;
}

Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const Gf2Poly& small = a.words_.size() <= b.words_.size() ? a : b;
  const Gf2Poly& big = a.words_.size() <= b.words_.size() ? b : a;
  Gf2Poly r;
  r.words_.assign(a.words_.size() + b.words_.size() + 1, 0);
  for (std::size_t w = 0; w < small.words_.size(); ++w) {
    std::uint64_t word = small.words_[w];
    while (word != 0) {
      const int bit = std::countr_zero(word);
      xor_shifted(r.words_, big.words_, w * 64 + static_cast<std::size_t>(bit));
      word &= word - 1;
    }
  }
  r.trim();
  return r;
}

Gf2Poly Gf2Poly::shifted(std::size_t k) const {
  if (is_zero()) return {};
  Gf2Poly r;
  r.words_.assign(words_.size() + (k >> 6) + 1, 0);
  xor_shifted(r.words_, words_, k);
  r.trim();
  return r;
}

std::pair<Gf2Poly, Gf2Poly> divmod(const Gf2Poly& a, const Gf2Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const int db = b.degree();
  Gf2Poly rem = a;
  Gf2Poly quo;
  int dr = rem.degree();
  if (dr < db) return {quo, rem};
  std::vector<std::uint64_t> r = rem.words();
  std::vector<std::uint64_t> q(static_cast<std::size_t>((dr - db) / 64 + 1), 0);
  r.resize(r.size() + 1, 0);
  for (int i = dr; i >= db; --i) {
    const std::size_t iu = static_cast<std::size_t>(i);
    if ((r[iu >> 6] >> (iu & 63)) & 1u) {
      const std::size_t shift = static_cast<std::size_t>(i - db);
      xor_shifted(r, b.words(), shift);
      q[shift >> 6] |= std::uint64_t{1} << (shift & 63);
    }
  }
  r.resize(std::min(r.size(), static_cast<std::size_t>(db / 64 + 1)));
  return {Gf2Poly::from_words(std::move(q)), Gf2Poly::from_words(std::move(r))};
}

Gf2Poly operator%(const Gf2Poly& a, const Gf2Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const int db = b.degree();
  if (a.degree() < db) return a;
  std::vector<std::uint64_t> r = a.words_;
  r.resize(r.size() + 1, 0);
  for (int i = a.degree(); i >= db; --i) {
    const std::size_t iu = static_cast<std::size_t>(i);
    if ((r[iu >> 6] >> (iu & 63)) & 1u) xor_shifted(r, b.words_, iu - static_cast<std::size_t>(db));
  }
  Gf2Poly out;
  out.words_ = std::move(r);
  out.trim();
  return out;
}

Gf2Poly operator/(const Gf2Poly& a, const Gf2Poly& b) { return divmod(a, b).first; }

bool operator<(const Gf2Poly& a, const Gf2Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
  }
  return false;
}

std::string Gf2Poly::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (!coeff(static_cast<std::size_t>(i))) continue;
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += "1";
    } else if (i == 1) {
      s += "X";
    } else {
      s += "X^" + std::to_string(i);
    }
  }
  return s;
}

std::size_t Gf2Poly::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (auto w : words_) {
    h ^= w;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

Gf2Poly gcd(Gf2Poly a, Gf2Poly b) {
  while (!b.is_zero()) {
    Gf2Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Gf2Poly derivative(const Gf2Poly& p) {
  // d/dX sum a_i X^i = sum_{i odd} a_i X^{i-1} over F2.
  Gf2Poly d;
  for (int i = 1; i <= p.degree(); i += 2) {
    if (p.coeff(static_cast<std::size_t>(i))) d.set_coeff(static_cast<std::size_t>(i - 1), true);
  }
  return d;
}

Gf2Poly square(const Gf2Poly& p) {
  const auto& w = p.words();
  std::vector<std::uint64_t> out(w.size() * 2, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[2 * i] = spread_bits(w[i]);
    out[2 * i + 1] = spread_bits(w[i] >> 32);
  }
  return Gf2Poly::from_words(std::move(out));
}

Gf2Poly square_root(const Gf2Poly& p) {
  const auto& w = p.words();
  std::vector<std::uint64_t> out((w.size() + 1) / 2, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] & 0xAAAAAAAAAAAAAAAAull) {
      throw std::domain_error("square_root of a non-square polynomial");
    }
    out[i / 2] |= gather_even_bits(w[i]) << ((i & 1u) * 32);
  }
  return Gf2Poly::from_words(std::move(out));
}

Gf2Poly mulmod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m) { return (a * b) % m; }

Gf2Poly powmod(const Gf2Poly& base, std::uint64_t e, const Gf2Poly& m) {
  Gf2Poly result = Gf2Poly::one() % m;
  Gf2Poly b = base % m;
  while (e != 0) {
    if (e & 1u) result = mulmod(result, b, m);
    e >>= 1;
    if (e != 0) b = mulmod(b, b, m);
  }
  return result;
}

Gf2Poly x_pow_mod(std::uint64_t e, const Gf2Poly& m) { return powmod(Gf2Poly::x(), e, m); }

bool divides_x_pow_minus_one(const Gf2Poly& p, std::uint64_t n) {
  if (p.is_zero()) return false;
  if (p.degree() == 0) return true;
  return x_pow_mod(n, p).is_one();
}

bool is_irreducible(const Gf2Poly& p) {
  if (p.degree() < 1) return false;
  const auto f = factor(p);
  return f.size() == 1 && f.front().exponent == 1;
}

std::vector<PolyFactor> factor(const Gf2Poly& p) {
  if (p.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
  std::vector<std::pair<Gf2Poly, int>> sqf;
  squarefree(p, 1, sqf);
  std::vector<PolyFactor> out;
  std::mt19937_64 rng(0x5eed0f2a11u ^ p.hash());
  for (const auto& [part, mult] : sqf) {
    for (const auto& [block, d] : distinct_degree(part)) {
      std::vector<Gf2Poly> irreducibles;
      equal_degree(block, d, rng, irreducibles);
      for (auto& q : irreducibles) out.push_back({std::move(q), mult});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PolyFactor& a, const PolyFactor& b) { return a.poly < b.poly; });
  std::vector<PolyFactor> merged;
  for (auto& f : out) {
    if (!merged.empty() && merged.back().poly == f.poly) {
      merged.back().exponent += f.exponent;
    } else {
      merged.push_back(std::move(f));
    }
  }
  return merged;
}

std::vector<std::uint64_t> factor_integer(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool checked_lcm(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  if (a == 0 || b == 0) {
    out = 0;
    return true;
  }
  const std::uint64_t g = std::gcd(a, b);
  const u128 v = static_cast<u128>(a / g) * b;
  if (v > static_cast<u128>(UINT64_MAX)) return false;
  out = static_cast<std::uint64_t>(v);
  return true;
}

namespace {

// Distinct prime factors of 2^d - 1, memoized since the same degrees recur.
std::vector<std::uint64_t> mersenne_primes(int d, std::uint64_t group) {
  static std::mutex mu;
  static std::map<int, std::vector<std::uint64_t>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  auto primes = factor_integer(group);
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::lock_guard lock(mu);
  cache.emplace(d, primes);
  return primes;
}

}  // namespace

std::uint64_t irreducible_order(const Gf2Poly& p) {
  const int d = p.degree();
  if (d < 1) throw std::domain_error("order requires a non-constant irreducible polynomial");
  if (!p.constant_term()) throw std::domain_error("order undefined for p(0) = 0");
  if (d <= 64) {
    const std::uint64_t group = d == 64 ? UINT64_MAX : (std::uint64_t{1} << d) - 1;
    const auto primes = mersenne_primes(d, group);
    std::uint64_t e = group;
    for (auto q : primes) {
      while (e % q == 0 && x_pow_mod(e / q, p).is_one()) e /= q;
    }
    return e;
  }
  // Degree too large to factor 2^d - 1: baby-step giant-step search for the
  // least e with X^e = 1, with the search bound growing up to 2^40.
  for (std::uint64_t m = 256; m <= (std::uint64_t{1} << 20); m <<= 2) {
    std::unordered_map<Gf2Poly, std::uint64_t, Gf2PolyHash> baby;
    baby.reserve(m * 2);
    Gf2Poly cur = Gf2Poly::one();
    const Gf2Poly xp = Gf2Poly::x();
    for (std::uint64_t j = 0; j < m; ++j) {
      if (j > 0 && cur.is_one()) return j;
      baby.emplace(cur, j);
      cur = mulmod(cur, xp, p);
    }
    const Gf2Poly giant = cur;  // X^m
    Gf2Poly g = giant;
    for (std::uint64_t i = 1; i <= m; ++i) {
      auto it = baby.find(g);
      if (it != baby.end()) return i * m - it->second;
      g = mulmod(g, giant, p);
    }
  }
  throw std::overflow_error("polynomial order exceeds the 2^40 search bound");
}

std::uint64_t poly_order(const Gf2Poly& p) {
  if (p.is_zero()) throw std::domain_error("order undefined for the zero polynomial");
  if (!p.constant_term()) throw std::domain_error("order undefined for p(0) = 0");
  if (p.degree() == 0) return 1;
  std::uint64_t order = 1;
  for (const auto& f : factor(p)) {
    std::uint64_t t = irreducible_order(f.poly);
    // ord(q^e) = ord(q) * 2^ceil(log2 e)
    const unsigned shift =
        f.exponent <= 1 ? 0u
                        : static_cast<unsigned>(std::bit_width(static_cast<unsigned>(f.exponent - 1)));
    if (shift > 0 && (shift >= 64 || (t >> (64 - shift)) != 0)) {
      throw std::overflow_error("polynomial order exceeds 64 bits");
    }
    t <<= shift;
    if (!checked_lcm(order, t, order)) throw std::overflow_error("polynomial order exceeds 64 bits");
  }
  return order;
}

}  // namespace locinv

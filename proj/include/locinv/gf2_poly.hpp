#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace locinv {

/// Univariate polynomial over F2, coefficient of X^i stored in bit i.
/// Always trimmed: the zero polynomial has no words and degree -1.
class Gf2Poly {
 public:
  Gf2Poly() = default;

  static Gf2Poly zero() { return {}; }
  static Gf2Poly one() { return monomial(0); }
  static Gf2Poly x() { return monomial(1); }
  static Gf2Poly monomial(std::size_t degree);
  /// Sum of X^e over the given exponents (duplicates cancel).
  static Gf2Poly from_exponents(std::initializer_list<std::size_t> exps);
  static Gf2Poly from_exponents(const std::vector<std::size_t>& exps);
  /// Low `bits` coefficients taken from an integer, X^0 in bit 0.
  static Gf2Poly from_uint(std::uint64_t bits);
  static Gf2Poly from_words(std::vector<std::uint64_t> words);
  /// Coefficients a_0..a_k given as a 0/1 vector.
  static Gf2Poly from_coefficients(const std::vector<int>& coeffs);
  /// Parses `X^3+X^2+X+1`, `X`, `1`, `0`.
  static Gf2Poly parse(const std::string& text);

  int degree() const;
  bool is_zero() const { return words_.empty(); }
  bool is_one() const { return words_.size() == 1 && words_[0] == 1; }
  bool coeff(std::size_t i) const {
    return (i >> 6) < words_.size() && ((words_[i >> 6] >> (i & 63)) & 1u);
  }
  void set_coeff(std::size_t i, bool v);
  /// Constant term a_0.
  bool constant_term() const { return coeff(0); }
  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  Gf2Poly& operator+=(const Gf2Poly& other);
  friend Gf2Poly operator+(Gf2Poly a, const Gf2Poly& b) { return a += b; }
  friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b);
  friend Gf2Poly operator%(const Gf2Poly& a, const Gf2Poly& b);
  friend Gf2Poly operator/(const Gf2Poly& a, const Gf2Poly& b);
  Gf2Poly shifted(std::size_t k) const;

  friend bool operator==(const Gf2Poly&, const Gf2Poly&) = default;
  /// Orders by degree, then by coefficients from the top down.
  friend bool operator<(const Gf2Poly& a, const Gf2Poly& b);

  std::string to_string() const;
  std::size_t hash() const;

 private:
  void trim();
  std::vector<std::uint64_t> words_;
};

std::pair<Gf2Poly, Gf2Poly> divmod(const Gf2Poly& a, const Gf2Poly& b);
Gf2Poly gcd(Gf2Poly a, Gf2Poly b);
Gf2Poly derivative(const Gf2Poly& p);
Gf2Poly square(const Gf2Poly& p);
/// Square root of a polynomial whose odd coefficients vanish.
Gf2Poly square_root(const Gf2Poly& p);
Gf2Poly mulmod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m);
Gf2Poly powmod(const Gf2Poly& base, std::uint64_t e, const Gf2Poly& m);
/// X^e mod m.
Gf2Poly x_pow_mod(std::uint64_t e, const Gf2Poly& m);
/// True when p divides X^n - 1.
bool divides_x_pow_minus_one(const Gf2Poly& p, std::uint64_t n);

bool is_irreducible(const Gf2Poly& p);

struct PolyFactor {
  Gf2Poly poly;
  int exponent = 1;
  friend bool operator==(const PolyFactor&, const PolyFactor&) = default;
};

/// Complete factorization into irreducibles, sorted ascending, each prime once.
/// Equal-degree splitting draws from a fixed-seed generator, so output is deterministic.
std::vector<PolyFactor> factor(const Gf2Poly& p);

/// Least N >= 1 with p | X^N - 1. Throws std::domain_error when p(0) = 0 and
/// std::overflow_error when the order does not fit the representable range.
std::uint64_t poly_order(const Gf2Poly& p);
/// Order of an irreducible polynomial with nonzero constant term.
std::uint64_t irreducible_order(const Gf2Poly& p);

/// Prime factors of a 64-bit integer, ascending with repetition.
std::vector<std::uint64_t> factor_integer(std::uint64_t n);

/// lcm with overflow detection; returns false when the result exceeds 64 bits.
bool checked_lcm(std::uint64_t a, std::uint64_t b, std::uint64_t& out);

struct Gf2PolyHash {
  std::size_t operator()(const Gf2Poly& p) const { return p.hash(); }
};

}  // namespace locinv

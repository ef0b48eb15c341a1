#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locinv/bitvec.hpp"

namespace locinv {

/// Boolean polynomial in algebraic normal form: XOR of AND-monomials.
///
/// A monomial is a variable mask in the point encoding (x1 is bit nvars-1), so a
/// monomial m evaluates to 1 at code c exactly when (c & m) == m. The empty mask is
/// the constant 1. Monomials are kept sorted and unique (XOR-canonical).
class AnfPoly {
 public:
  AnfPoly() = default;
  explicit AnfPoly(int nvars) : nvars_(nvars) {}
  AnfPoly(int nvars, std::vector<std::uint64_t> monomials);

  static AnfPoly constant(int nvars, bool value);
  /// The coordinate function x_{i+1}.
  static AnfPoly variable(int nvars, int i);
  /// Interpolates a truth table (index = point code) with the Moebius transform.
  static AnfPoly from_truth_table(int nvars, const BitVec& table);

  int nvars() const { return nvars_; }
  const std::vector<std::uint64_t>& monomials() const { return monomials_; }
  bool is_zero() const { return monomials_.empty(); }
  int degree() const;

  bool evaluate(std::uint64_t code) const;
  BitVec truth_table() const;

  AnfPoly& operator+=(const AnfPoly& other);
  friend AnfPoly operator+(AnfPoly a, const AnfPoly& b) { return a += b; }
  friend AnfPoly operator*(const AnfPoly& a, const AnfPoly& b);

  /// Renders as `x1*x2 + x3 + 1`; the zero polynomial renders as `0`.
  std::string to_string() const;

  friend bool operator==(const AnfPoly&, const AnfPoly&) = default;

 private:
  void canonicalize();

  int nvars_ = 0;
  std::vector<std::uint64_t> monomials_;
};

/// In-place Moebius transform over the index bits of a 2^nvars truth table.
/// It is an involution: it maps ANF coefficients to values and back.
void moebius_transform(BitVec& table, int nvars);

}  // namespace locinv

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locinv/bitvec.hpp"
#include "locinv/gf2_poly.hpp"
#include "locinv/map.hpp"

namespace locinv {

/// Truth table of a function F2^n -> F2, bit index = point code.
using FuncVec = BitVec;

/// The coordinate function x_{i+1} as a truth table.
FuncVec coordinate_function(int n, int i);

/// Pullback F*f = f o F.
FuncVec dual_apply(const TableMap& map, const FuncVec& f);

/// Basis psi_1..psi_N of the smallest F*-invariant space W containing the
/// coordinate functions, and the matrix of F* on W. Column i of K holds the
/// coordinates of F*psi_i, so psi(F(x)) = K^T psi(x).
struct KoopmanRep {
  int n = 0;
  std::vector<FuncVec> basis;
  BitMatrix K;
  /// Row i: coordinates of x_{i+1} in the basis.
  std::vector<BitVec> coord_coeffs;

  std::size_t dimension() const { return basis.size(); }
  /// (psi_1(x), ..., psi_N(x)).
  BitVec embed(std::uint64_t x) const;
};

/// Accumulates the cyclic spans of x_{order[0]+1}, x_{order[1]+1}, ... (all
/// coordinates in index order when `order` is empty). Throws std::length_error above
/// the Koopman limit and std::logic_error if the embedding check fails.
KoopmanRep build_invariant_space(const TableMap& map, const std::vector<int>& order = {});
KoopmanRep build_invariant_space(const PolyMap& map, const std::vector<int>& order = {});

bool is_permutation(const KoopmanRep& rep);

/// Characteristic polynomial by similarity reduction to upper Hessenberg form.
Gf2Poly characteristic_polynomial(const BitMatrix& a);

/// Evaluates p at a square matrix.
BitMatrix poly_eval(const Gf2Poly& p, const BitMatrix& a);

struct ElementaryDivisors {
  /// Divisors p^e with p(0) != 0, one entry per cyclic block, ascending.
  std::vector<PolyFactor> blocks;
  /// Size of the nilpotent part (the X^s factor of the characteristic polynomial).
  int nilpotent_dimension = 0;
  /// Dimension of the invertible part.
  int invertible_dimension = 0;

  /// Degree of the minimal polynomial of the invertible part.
  int invertible_minpoly_degree() const;
  /// `(X+1)^2 (X^2+X+1)^1`, with `X^s` appended for a nilpotent part.
  std::string to_string() const;
};

ElementaryDivisors elementary_divisors(const BitMatrix& K);

struct PeriodSet {
  std::vector<std::uint64_t> periods;  // ascending, contains 1
  bool lcm_closed = false;
  /// Set when lcm closure stopped early (overflow or size cap).
  bool truncated = false;

  std::uint64_t max() const { return periods.back(); }
  bool contains(std::uint64_t p) const;
  /// `1,2,4`.
  std::string to_string() const;
};

/// {1} together with ord(p^j) for every block p^e and j = 1..e; with closure the
/// set is also closed under lcm.
PeriodSet period_set(const ElementaryDivisors& div, bool lcm_closure = true);

}  // namespace locinv

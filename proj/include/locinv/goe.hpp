#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "locinv/anf.hpp"
#include "locinv/koopman.hpp"
#include "locinv/map.hpp"

namespace locinv {

enum class GoeBackend { brute, implicant };

std::string to_string(GoeBackend b);
GoeBackend parse_goe_backend(std::string_view s);

/// Points outside the image of F, ascending.
struct GoeSet {
  std::vector<Point> points;
  GoeBackend backend = GoeBackend::brute;

  bool contains(const Point& y) const;
};

GoeSet goe_brute(const TableMap& map);

/// Conjunction of literals over variable ids: x_{i+1} has id i, y_{i+1} has id n+i.
/// Bit id of `care` marks a literal, the same bit of `value` its polarity.
struct Term {
  std::uint64_t care = 0;
  std::uint64_t value = 0;

  bool satisfied_by(std::uint64_t assignment) const { return (assignment & care) == value; }
  /// Literal string such as `x1x2'y2`; x literals first, then y, each ascending.
  std::string to_string(int nx) const;
  /// Accepts literals in any order, e.g. `x1'x2y2x3y1`; `1` is the empty term.
  static Term parse(std::string_view text, int nx);

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class PivotRule {
  /// Next pivot is the factor whose refinement yields the fewest terms; ties by index.
  min_fanout,
  /// Factors in the order given.
  index,
};

struct ExpandOptions {
  PivotRule rule = PivotRule::min_fanout;
  int threads = 1;
};

/// Complete orthogonal implicant set of a product of factors, with the term list
/// after every pivot.
struct ImplicantSet {
  int nx = 0;
  int ny = 0;
  std::vector<Term> terms;
  std::vector<int> pivot_order;
  std::vector<std::vector<Term>> stages;
  /// Set by verify_implicants.
  bool orthogonal = false;
  bool complete = false;
};

/// The factors g_i + 1 = f_i(X) + y_i + 1 over the 2n variables x1..xn, y1..yn.
std::vector<AnfPoly> system_factors(const PolyMap& map);

/// Refines an orthonormal term set factor by factor: the first pivot starts from
/// the ladder {v1, v1'v2, ..., v1'..v_{k-1}'v_k, v1'..v_k'} on its X variables, and
/// each term t is replaced by the Shannon expansion of the cofactor g/t.
/// `factors` are polynomials over nx + ny variables (X first).
ImplicantSet orthonormal_expand(const std::vector<AnfPoly>& factors, int nx,
                                const ExpandOptions& opts = {});

/// Exhaustive check over all 2^(nx+ny) assignments that the terms are pairwise
/// disjoint and cover exactly the satisfying set of the product of factors.
/// Sets the flags and returns their conjunction. Requires nx + ny <= 24.
bool verify_implicants(ImplicantSet& set, const std::vector<AnfPoly>& factors);

/// phi(Y) = OR of the Y parts of all terms, indexed by Y's point code.
FuncVec phi_function(const ImplicantSet& set);

GoeSet goe_implicant(const PolyMap& map, const ExpandOptions& opts = {});

}  // namespace locinv

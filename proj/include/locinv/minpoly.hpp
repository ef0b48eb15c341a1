#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "locinv/bitvec.hpp"
#include "locinv/gf2_poly.hpp"
#include "locinv/map.hpp"

namespace locinv {

/// The iterate sequence y, F(y), F^(2)(y), ... Terms are cached and the cache grows
/// by doubling. Extension is internally locked, so one sequence may be shared.
class IterSequence {
 public:
  IterSequence(MapView map, Point y);

  int dimension() const { return map_.dimension(); }
  const Point& start() const { return y_; }
  const MapView& map() const { return map_; }

  /// Term F^(k)(y) as a point code.
  std::uint64_t at(std::size_t k) const;
  Point term(std::size_t k) const { return Point(dimension(), at(k)); }
  /// Copy of the first len terms.
  std::vector<std::uint64_t> prefix(std::size_t len) const;
  std::size_t cached() const;

 private:
  void extend_to(std::size_t len) const;

  MapView map_;
  Point y_;
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  mutable std::vector<std::uint64_t> terms_;
};

IterSequence generate_sequence(const MapView& map, const Point& y, std::size_t len);

/// nm x m matrix whose block row r, column c holds F^(r+c+j)(y); coordinate i of
/// a point sits in row r*n + i.
struct BlockHankel {
  int m = 0;
  int j = 0;
  BitMatrix bits;
  /// Right-hand side h: block row r holds F^(r+m+j)(y).
  BitVec rhs;
};

BlockHankel build_hankel(const IterSequence& seq, int m, int j);

struct MinpolyOptions {
  int m0 = 1;
  int max_degree = 64;
  /// Consecutive shifts j = 1..J checked after j = 0.
  int shifts = 2;
  /// Extra shifts drawn from a generator seeded by y and m.
  int random_shifts = 2;
};

struct MinimalPolyResult {
  Gf2Poly poly;
  int degree = 0;
  /// Least N with poly | X^N - 1; absent when the constant term is 0, i.e. the
  /// sequence is not periodic.
  std::optional<std::uint64_t> order;
  /// rank H_m and the smallest rank seen among the shifted matrices.
  std::size_t rank = 0;
  std::size_t shifted_rank = 0;
  bool zero_sequence = false;

  std::vector<bool> alpha() const;
  std::string to_string() const;
};

/// First degree m in [m0, max_degree] passing the rank test: rank H_m = m, the
/// system H_m alpha = h is consistent, and for every checked shift the shifted
/// matrix has rank m and is solved by the same alpha. The zero sequence yields the
/// constant polynomial 1.
std::optional<MinimalPolyResult> minimal_polynomial(const IterSequence& seq,
                                                    const MinpolyOptions& opts = {});
std::optional<MinimalPolyResult> minimal_polynomial(const MapView& map, const Point& y,
                                                    const MinpolyOptions& opts = {});

/// x = F^(m-1)(y) + sum_{i=1}^{m-1} alpha_i F^(i-1)(y). The caller verifies F(x) = y.
Point solve_in_orbit(const IterSequence& seq, const MinimalPolyResult& mp);

}  // namespace locinv

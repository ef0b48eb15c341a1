#pragma once

// Slow, independent reference computations used by the tests. They only rely on
// PolyMap::eval_code as the definition of F; everything else is recomputed here
// from first principles.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "locinv/map.hpp"

namespace oracle {

using u64 = std::uint64_t;

/// Full forward table by direct evaluation.
inline std::vector<u64> table_of(const locinv::PolyMap& f) {
  std::vector<u64> t(u64{1} << f.dimension());
  for (u64 x = 0; x < t.size(); ++x) t[x] = f.eval_code(x);
  return t;
}

/// Period of x if x lies on a cycle, else 0.
inline u64 period_of(const std::vector<u64>& t, u64 x) {
  u64 z = t[x];
  for (u64 k = 1; k <= t.size(); ++k) {
    if (z == x) return k;
    z = t[z];
  }
  return 0;
}

/// Set of all cycle lengths of the functional graph.
inline std::set<u64> cycle_lengths(const std::vector<u64>& t) {
  std::set<u64> out;
  for (u64 x = 0; x < t.size(); ++x) {
    if (u64 p = period_of(t, x); p != 0) out.insert(p);
  }
  return out;
}

inline std::vector<u64> preimages(const std::vector<u64>& t, u64 y) {
  std::vector<u64> out;
  for (u64 x = 0; x < t.size(); ++x) {
    if (t[x] == y) out.push_back(x);
  }
  return out;
}

/// Polynomial over F2 with degree < 64 as a bit mask (X^i in bit i).
inline int deg(u64 p) { return p == 0 ? -1 : 63 - __builtin_clzll(p); }

/// X^k mod p for small degree p by repeated shifting.
inline u64 x_pow_mod(u64 k, u64 p) {
  const int d = deg(p);
  u64 r = 1;
  if (d == 0) return 0;
  for (u64 i = 0; i < k; ++i) {
    r <<= 1;
    if ((r >> d) & 1u) r ^= p;
  }
  return r;
}

/// Least N in [1, limit] with p | X^N - 1, by trying every N.
inline std::optional<u64> order(u64 p, u64 limit) {
  const int d = deg(p);
  if (d < 0 || (p & 1u) == 0) return std::nullopt;
  if (d == 0) return 1;
  u64 r = 1;
  for (u64 n = 1; n <= limit; ++n) {
    r <<= 1;
    if ((r >> d) & 1u) r ^= p;
    if (r == 1) return n;
  }
  return std::nullopt;
}

/// Does the monic polynomial p (mask, degree < 64) annihilate the sequence seq
/// over the whole available window?
inline bool annihilates(u64 p, const std::vector<u64>& seq) {
  const int d = deg(p);
  for (std::size_t k = 0; k + static_cast<std::size_t>(d) < seq.size(); ++k) {
    u64 acc = 0;
    for (int i = 0; i <= d; ++i) {
      if ((p >> i) & 1u) acc ^= seq[k + static_cast<std::size_t>(i)];
    }
    if (acc != 0) return false;
  }
  return true;
}

/// Least-degree monic annihilator of the sequence, trying every polynomial of
/// degree <= max_degree in increasing order.
inline std::optional<u64> minimal_polynomial(const std::vector<u64>& seq, int max_degree) {
  for (int d = 0; d <= max_degree; ++d) {
    const u64 top = u64{1} << d;
    for (u64 low = 0; low < top; ++low) {
      if (annihilates(top | low, seq)) return top | low;
    }
  }
  return std::nullopt;
}

inline std::vector<u64> orbit_sequence(const locinv::PolyMap& f, u64 y, std::size_t len) {
  std::vector<u64> s;
  s.reserve(len);
  for (std::size_t k = 0; k < len; ++k) {
    s.push_back(y);
    y = f.eval_code(y);
  }
  return s;
}

/// Image complement by direct evaluation.
inline std::vector<u64> garden_of_eden(const std::vector<u64>& t) {
  std::vector<bool> hit(t.size(), false);
  for (u64 v : t) hit[v] = true;
  std::vector<u64> out;
  for (u64 y = 0; y < t.size(); ++y) {
    if (!hit[y]) out.push_back(y);
  }
  return out;
}

}  // namespace oracle

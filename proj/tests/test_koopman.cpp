#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "locinv/koopman.hpp"
#include "oracles.hpp"

using namespace locinv;
using fixtures::pt;

namespace {

// det(X*I + A) by the Leibniz formula with polynomial entries (bit masks).
std::uint64_t leibniz_charpoly(const BitMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto mul = [](std::uint64_t x, std::uint64_t y) {
    std::uint64_t r = 0;
    for (int i = 0; i < 32; ++i)
      if ((y >> i) & 1u) r ^= x << i;
    return r;
  };
  std::uint64_t det = 0;
  do {
    std::uint64_t term = 1;
    for (std::size_t i = 0; i < n && term != 0; ++i) {
      std::uint64_t entry = a.get(i, perm[i]) ? 1 : 0;
      if (perm[i] == i) entry ^= 2;  // X on the diagonal
      term = mul(term, entry);
    }
    det ^= term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

BitMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, rng() & 1u);
  return m;
}

PolyMap linear_map(const BitMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<AnfPoly> comps;
  for (int i = 0; i < n; ++i) {
    AnfPoly p(n);
    for (int j = 0; j < n; ++j)
      if (a.get(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) p += AnfPoly::variable(n, j);
    comps.push_back(p);
  }
  return PolyMap(n, comps);
}

}  // namespace

TEST_CASE("dual map examples") {
  const auto t = compile_table(fixtures::three_bit());
  const FuncVec x2 = coordinate_function(3, 1);
  const FuncVec expect = coordinate_function(3, 0) ^ coordinate_function(3, 1);
  CHECK(dual_apply(t, x2) == expect);
  CHECK(dual_apply(TableMap::identity(3), x2) == x2);
  FuncVec one(8);
  for (std::size_t i = 0; i < 8; ++i) one.set(i);
  CHECK(dual_apply(t, one) == one);
}

TEST_CASE("invariant space of the identity") {
  const auto rep = build_invariant_space(PolyMap::identity(3));
  CHECK(rep.dimension() == 3);
  CHECK(rep.K == BitMatrix::identity(3));
  CHECK(is_permutation(rep));
}

TEST_CASE("invariant space of the three-bit map") {
  const auto f = fixtures::three_bit();
  const auto rep = build_invariant_space(f);
  CHECK(rep.dimension() >= 3);
  const BitMatrix kt = rep.K.transpose();
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(rep.embed(f.eval_code(x)) == kt * rep.embed(x));
  CHECK_FALSE(is_permutation(rep));
  CHECK(is_permutation(build_invariant_space(parse_map("n=1\ny1 = x1 + 1\n"))));
}

TEST_CASE("linear maps close within the coordinates") {
  std::mt19937_64 rng(51);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng() % 5;
    const auto a = random_matrix(n, rng);
    const auto k = build_invariant_space(linear_map(a));
    CHECK(k.dimension() <= n);
    if (k.dimension() == n) {
      CHECK(characteristic_polynomial(k.K) == Gf2Poly::from_uint(leibniz_charpoly(a)));
    }
  }
}

TEST_CASE("characteristic polynomial agrees with the Leibniz oracle") {
  std::mt19937_64 rng(52);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 7;
    const auto a = random_matrix(n, rng);
    CHECK(characteristic_polynomial(a) == Gf2Poly::from_uint(leibniz_charpoly(a)));
  }
}

TEST_CASE("elementary divisor examples") {
  const auto id = elementary_divisors(BitMatrix::identity(3));
  CHECK(id.to_string() == "(X+1)^1 (X+1)^1 (X+1)^1");
  CHECK(period_set(id).to_string() == "1");

  const auto comp = elementary_divisors(BitMatrix::from_rows({"01", "11"}));
  CHECK(comp.to_string() == "(X^2+X+1)^1");
  CHECK(period_set(comp).to_string() == "1,3");

  const auto jordan = elementary_divisors(BitMatrix::from_rows({"11", "01"}));
  CHECK(jordan.to_string() == "(X+1)^2");
  CHECK(period_set(jordan).to_string() == "1,2");

  const auto nil = elementary_divisors(BitMatrix::from_rows({"010", "001", "000"}));
  CHECK(nil.blocks.empty());
  CHECK(nil.nilpotent_dimension == 3);
}

TEST_CASE("elementary divisors reassemble the characteristic polynomial") {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 40; ++rep) {
    const auto f = random_map(3 + static_cast<int>(rng() % 5), rng);
    const auto k = build_invariant_space(f);
    const auto div = elementary_divisors(k.K);
    Gf2Poly prod = Gf2Poly::monomial(static_cast<std::size_t>(div.nilpotent_dimension));
    for (const auto& b : div.blocks)
      for (int e = 0; e < b.exponent; ++e) prod = prod * b.poly;
    CHECK(prod == characteristic_polynomial(k.K));
  }
  // Block structure of a direct sum with known blocks: J2(X+1) + J1(X+1) + companion(X^2+X+1).
  const auto m = BitMatrix::from_rows({"11000", "01000", "00100", "00001", "00011"});
  CHECK(elementary_divisors(m).to_string() == "(X+1)^1 (X+1)^2 (X^2+X+1)^1");
}

TEST_CASE("period set of the three-bit map contains its periods") {
  const auto k = build_invariant_space(fixtures::three_bit());
  const auto ps = period_set(elementary_divisors(k.K));
  CHECK(ps.contains(1));
  CHECK(ps.contains(4));
}

TEST_CASE("permutation test agrees with bijectivity") {
  std::mt19937_64 rng(54);
  for (int rep = 0; rep < 80; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 8);
    PolyMap f;
    if (rep % 2 == 0) {
      // Random permutation table.
      std::vector<std::uint32_t> t(std::size_t{1} << n);
      std::iota(t.begin(), t.end(), 0u);
      std::shuffle(t.begin(), t.end(), rng);
      f = to_poly_map(TableMap(n, t));
    } else {
      f = random_map(n, rng);
    }
    CHECK(is_permutation(build_invariant_space(f)) == compile_table(f).is_bijection());
  }
}

TEST_CASE("cycle lengths are contained in the period set") {
  std::mt19937_64 rng(55);
  int violations_closed = 0, violations_open = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto f = random_map(n, rng);
    const auto div = elementary_divisors(build_invariant_space(f).K);
    const auto closed = period_set(div, true);
    const auto open = period_set(div, false);
    for (auto c : oracle::cycle_lengths(oracle::table_of(f))) {
      violations_closed += !closed.contains(c);
      violations_open += !open.contains(c);
    }
  }
  CHECK(violations_closed == 0);
  MESSAGE("cycle lengths missing from the set without lcm closure: " << violations_open);
}

TEST_CASE("accumulation order does not change dimension, divisors or periods") {
  std::mt19937_64 rng(56);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto f = random_map(n, rng);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto a = build_invariant_space(f);
    std::shuffle(order.begin(), order.end(), rng);
    const auto b = build_invariant_space(f, order);
    CHECK(a.dimension() == b.dimension());
    const auto da = elementary_divisors(a.K), db = elementary_divisors(b.K);
    CHECK(da.to_string() == db.to_string());
    CHECK(period_set(da).periods == period_set(db).periods);
  }
}

TEST_CASE("lcm closure is needed: a 15-cycle built from period-3 and period-5 coordinates") {
  // Points (a(k mod 3), b(k mod 5)); everything off the cycle maps onto it.
  const std::uint32_t a[3] = {2, 1, 3};
  const std::uint32_t b[5] = {8, 4, 2, 1, 15};
  auto at = [&](int k) { return (a[k % 3] << 4) | b[k % 5]; };
  std::vector<std::uint32_t> t(64, at(0));
  for (int k = 0; k < 15; ++k) t[at(k)] = at((k + 1) % 15);
  const TableMap m(6, t);
  const auto div = elementary_divisors(build_invariant_space(m).K);
  CHECK(div.to_string() == "(X^2+X+1)^1 (X^4+X^3+X^2+X+1)^1 X^6");
  CHECK(period_set(div, false).to_string() == "1,3,5");
  CHECK(period_set(div, true).to_string() == "1,3,5,15");
}

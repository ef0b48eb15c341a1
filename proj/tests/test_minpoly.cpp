#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "locinv/minpoly.hpp"
#include "oracles.hpp"

using namespace locinv;
using fixtures::pt;

TEST_CASE("sequence generation") {
  const MapView f(fixtures::three_bit());
  const auto s = generate_sequence(f, pt("110"), 5);
  CHECK(s.prefix(5) == std::vector<std::uint64_t>{6, 5, 7, 4, 6});
  const auto c = generate_sequence(f, pt("010"), 3);
  CHECK(c.prefix(3) == std::vector<std::uint64_t>{2, 3, 7});
  const MapView id(PolyMap::identity(3));
  CHECK(generate_sequence(id, pt("101"), 3).prefix(3) == std::vector<std::uint64_t>{5, 5, 5});
}

TEST_CASE("Hankel matrices") {
  const MapView f(fixtures::three_bit());
  const IterSequence s(f, pt("110"));
  const auto h1 = build_hankel(s, 1, 0);
  CHECK(h1.bits.to_string() == "1\n1\n0\n");
  const auto h3 = build_hankel(s, 3, 0);
  CHECK(h3.bits.rows() == 9);
  // Columns (y0,y1,y2), (y1,y2,y3), (y2,y3,y4) stacked by block row.
  CHECK(h3.bits.to_string() ==
        "111\n101\n011\n"
        "111\n010\n110\n"
        "111\n101\n100\n");
  CHECK(gf2_rank(h3.bits) == 3);
  const MapView id(PolyMap::identity(3));
  const IterSequence c(id, pt("011"));
  CHECK(gf2_rank(build_hankel(c, 2, 1).bits) == 1);
}

TEST_CASE("minimal polynomial of the 4-cycle point") {
  const MapView f(fixtures::three_bit());
  const IterSequence s(f, pt("110"));
  const auto mp = minimal_polynomial(s);
  REQUIRE(mp);
  CHECK(mp->poly.to_string() == "X^3+X^2+X+1");
  CHECK(mp->degree == 3);
  CHECK(mp->order == 4u);
  CHECK(mp->alpha() == std::vector<bool>{true, true, true});
  // Oracle: least-degree annihilator found by trying every polynomial.
  const auto ref = oracle::minimal_polynomial(oracle::orbit_sequence(fixtures::three_bit(), 6, 40), 4);
  REQUIRE(ref);
  CHECK(mp->poly == Gf2Poly::from_uint(*ref));
  const Point x = solve_in_orbit(s, *mp);
  CHECK(x == pt("100"));
  CHECK(fixtures::three_bit().eval(x) == pt("110"));
}

TEST_CASE("degenerate sequences") {
  const MapView id(PolyMap::identity(3));
  const IterSequence s(id, pt("101"));
  const auto mp = minimal_polynomial(s);
  REQUIRE(mp);
  CHECK(mp->poly.to_string() == "X+1");
  CHECK(solve_in_orbit(s, *mp) == pt("101"));

  const MapView f(fixtures::three_bit());
  const IterSequence z(f, pt("000"));
  const auto zp = minimal_polynomial(z);
  REQUIRE(zp);
  CHECK(zp->zero_sequence);
  CHECK(zp->poly.is_one());
  CHECK(solve_in_orbit(z, *zp) == pt("000"));
}

TEST_CASE("random periodic points: order equals period, predecessor recovered") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const auto f = random_map(n, rng);
    const auto t = oracle::table_of(f);
    const MapView view(f);
    for (std::uint64_t y = 0; y < t.size(); ++y) {
      const auto period = oracle::period_of(t, y);
      if (period == 0) continue;
      const IterSequence s(view, Point(n, y));
      const auto mp = minimal_polynomial(s, {.max_degree = static_cast<int>(period) + 1});
      REQUIRE(mp);
      if (mp->zero_sequence) {
        CHECK(period == 1);
        continue;
      }
      REQUIRE(mp->order);
      CHECK(*mp->order == period);
      // Minimality and divisibility against the oracle.
      const auto seq = oracle::orbit_sequence(f, y, 3 * period + 8);
      if (mp->degree <= 10) {
        const auto ref = oracle::minimal_polynomial(seq, mp->degree);
        REQUIRE(ref);
        CHECK(Gf2Poly::from_uint(*ref) == mp->poly);
      }
      CHECK(mp->poly.constant_term());
      CHECK(divides_x_pow_minus_one(mp->poly, period));
      const Point x = solve_in_orbit(s, *mp);
      CHECK(t[x.code()] == y);
      CHECK(oracle::period_of(t, x.code()) == period);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("rank of H_m is non-decreasing and settles at the linear complexity") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_map(6, rng);
    const auto t = oracle::table_of(f);
    for (std::uint64_t y = 0; y < t.size(); ++y) {
      if (oracle::period_of(t, y) == 0) continue;
      const IterSequence s(MapView(f), Point(6, y));
      const auto mp = minimal_polynomial(s);
      REQUIRE(mp);
      std::size_t prev = 0;
      for (int m = 1; m <= mp->degree + 4; ++m) {
        const std::size_t r = gf2_rank(build_hankel(s, m, 0).bits);
        CHECK(r >= prev);
        if (m >= mp->degree) CHECK(r == static_cast<std::size_t>(mp->degree));
        prev = r;
      }
      break;
    }
  }
}

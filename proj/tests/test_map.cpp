#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "locinv/map.hpp"
#include "oracles.hpp"

using namespace locinv;
using fixtures::pt;

TEST_CASE("points use x1 as the leading bit") {
  CHECK(pt("100").code() == 4);
  CHECK(pt("100").coordinate(0));
  CHECK(Point(3, 1).to_string() == "001");
  CHECK_THROWS(Point::parse("10a"));
  CHECK_THROWS(Point(2, 4));
}

TEST_CASE("parsing the three-bit map") {
  const auto f = fixtures::three_bit();
  CHECK(f.dimension() == 3);
  CHECK(f.serialize() ==
        "n=3\ny1 = x1 + x2*x3 + x1*x2*x3\ny2 = x1 + x2\ny3 = x2 + x1*x3\n");
  CHECK(parse_map(f.serialize()) == f);
  CHECK(parse_map("n=2\ny1 = x1\ny2 = x2\n") == PolyMap::identity(2));
  const auto c = parse_map("# complement\nn=1\n  y1 = x1 + 1   # flip\n");
  CHECK(c.eval(pt("0")) == pt("1"));
  CHECK(c.eval(pt("1")) == pt("0"));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_map("n=2\ny1 = x1 + x3\ny2 = x1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 12);
  }
  CHECK_THROWS_AS(parse_map("n=2\ny1 = x1\n"), ParseError);
  CHECK_THROWS_AS(parse_map("n=2\ny1 = x1\ny1 = x2\n"), ParseError);
  CHECK_THROWS_AS(parse_map("n=2\ny1 = x1 ++ x2\ny2 = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_map("y1 = x1\n"), ParseError);
  CHECK_THROWS_AS(parse_map("n=2\ny1 = x1 - x2\ny2 = 1\n"), ParseError);
}

TEST_CASE("evaluation examples") {
  const auto f = fixtures::three_bit();
  CHECK(f.eval(pt("100")) == pt("110"));
  CHECK(f.eval(pt("010")) == pt("011"));
  CHECK(PolyMap::identity(3).eval(pt("101")) == pt("101"));
}

TEST_CASE("compiled tables") {
  CHECK(compile_table(PolyMap::identity(2)).table() == std::vector<std::uint32_t>{0, 1, 2, 3});
  const auto zero = parse_map("n=2\ny1 = 0\ny2 = 0\n");
  CHECK(compile_table(zero).table() == std::vector<std::uint32_t>{0, 0, 0, 0});
  const auto t = compile_table(fixtures::three_bit());
  std::vector<bool> hit(8, false);
  for (auto v : t.table()) hit[v] = true;
  for (std::uint64_t y = 0; y < 8; ++y) CHECK(hit[y] == (y != 1 && y != 2));
}

TEST_CASE("composition") {
  const auto t = compile_table(fixtures::three_bit());
  CHECK(compose(t, TableMap::identity(3)) == t);
  CHECK(compose(t, t).eval(pt("100")) == pt("101"));
  const auto c = compile_table(parse_map("n=1\ny1 = x1 + 1\n"));
  CHECK(compose(c, c) == TableMap::identity(1));
}

TEST_CASE("power iteration examples") {
  const auto f = fixtures::three_bit();
  CHECK(power_iterate(f, pt("100"), 4) == pt("100"));
  CHECK(power_iterate(f, pt("100"), 5) == pt("110"));
  CHECK(power_iterate(f, pt("011"), 0) == pt("011"));
}

TEST_CASE("preimage examples") {
  const auto t = compile_table(fixtures::three_bit());
  CHECK(brute_preimages(t, pt("111")) == std::vector<Point>{pt("011"), pt("101")});
  CHECK(brute_preimages(t, pt("010")).empty());
  CHECK(brute_preimages(TableMap::identity(3), pt("110")) == std::vector<Point>{pt("110")});
}

TEST_CASE("random maps: table agrees with ANF, round trip, preimage partition") {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto f = rep == 0 ? random_sparse_map(n, 3, 0.3, rng) : random_map(n, rng);
      const auto t = compile_table(f);
      const auto ref = oracle::table_of(f);
      for (std::uint64_t x = 0; x < t.size(); ++x) REQUIRE(t(x) == ref[x]);
      CHECK(parse_map(f.serialize()) == f);
      CHECK(to_poly_map(t) == f);
      std::uint64_t total = 0;
      for (std::uint64_t y = 0; y < t.size(); ++y) total += brute_preimages(t, Point(n, y)).size();
      CHECK(total == t.size());
    }
  }
}

TEST_CASE("power iteration: naive agreement and additivity") {
  std::mt19937_64 rng(32);
  for (int n = 1; n <= 10; ++n) {
    const auto f = random_map(n, rng);
    const PowerIterator it(compile_table(f));
    for (int rep = 0; rep < 20; ++rep) {
      const Point x(n, rng() & ((1u << n) - 1));
      const std::uint64_t N = rng() % 1025;
      CHECK(it.apply(x, N) == naive_iterate(f, x, N));
      const std::uint64_t a = rng() % 65537, b = rng() % 65537;
      CHECK(it.apply(x, a + b) == it.apply(it.apply(x, b), a));
    }
  }
}

#include <random>

#include "doctest.h"
#include "locinv/bitvec.hpp"

using namespace locinv;

namespace {

BitMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng() & 1u);
  return m;
}

// Rank by counting distinct row-space vectors; only for tiny matrices.
std::size_t rank_by_span(const BitMatrix& m) {
  std::vector<std::uint64_t> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) v |= std::uint64_t{m.get(i, j)} << j;
    rows.push_back(v);
  }
  std::vector<bool> seen(std::size_t{1} << m.cols(), false);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if ((mask >> i) & 1u) v ^= rows[i];
    seen[v] = true;
  }
  std::size_t count = 0;
  for (bool b : seen) count += b;
  std::size_t r = 0;
  while ((std::size_t{1} << r) < count) ++r;
  return r;
}

}  // namespace

TEST_CASE("rank of trivial matrices") {
  CHECK(gf2_rank(BitMatrix(4, 5)) == 0);
  CHECK(gf2_rank(BitMatrix::identity(7)) == 7);
  CHECK(gf2_rank(BitMatrix::from_rows({"110", "011", "101"})) == 2);
}

TEST_CASE("rank agrees with span enumeration") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    auto m = random_matrix(r, c, rng);
    CHECK(gf2_rank(m) == rank_by_span(m));
    CHECK(gf2_rank(m.transpose()) == gf2_rank(m));
  }
}

TEST_CASE("solve returns a solution or proves inconsistency") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 1 + rng() % 70, c = 1 + rng() % 70;
    auto a = random_matrix(r, c, rng);
    BitVec b(r);
    for (std::size_t i = 0; i < r; ++i) b.set(i, rng() & 1u);
    auto x = gf2_solve(a, b);
    if (x) {
      CHECK(a * *x == b);
    } else {
      // Inconsistent: rank of [A | b] exceeds rank of A.
      BitMatrix aug(r, c + 1);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) aug.set(i, j, a.get(i, j));
        aug.set(i, c, b.get(i));
      }
      CHECK(gf2_rank(aug) == gf2_rank(a) + 1);
    }
  }
}

TEST_CASE("matrix product and power") {
  std::mt19937_64 rng(13);
  auto a = random_matrix(70, 70, rng);
  auto b = random_matrix(70, 70, rng);
  BitVec v(70);
  for (std::size_t i = 0; i < 70; ++i) v.set(i, rng() & 1u);
  CHECK((a * b) * v == a * (b * v));
  CHECK(matrix_power(a, 5) == a * a * a * a * a);
  CHECK(matrix_power(a, 0) == BitMatrix::identity(70));
  CHECK((a * b).transpose() == b.transpose() * a.transpose());
}

TEST_CASE("linear basis expresses members of the span") {
  std::mt19937_64 rng(14);
  LinearBasis basis(100);
  std::vector<BitVec> accepted;
  for (int t = 0; t < 60; ++t) {
    BitVec v(100);
    for (std::size_t i = 0; i < 100; ++i) v.set(i, (rng() % 5) == 0);
    if (basis.insert(v)) accepted.push_back(v);
  }
  CHECK(basis.rank() == accepted.size());
  BitVec combo(100);
  for (std::size_t i = 0; i < accepted.size(); i += 3) combo ^= accepted[i];
  auto coords = basis.express(combo);
  REQUIRE(coords);
  BitVec rebuilt(100);
  for (std::size_t i = 0; i < accepted.size(); ++i)
    if (coords->get(i)) rebuilt ^= accepted[i];
  CHECK(rebuilt == combo);
  CHECK_FALSE(basis.insert(combo));
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "trektoric/intlinalg.hpp"

using namespace trektoric;

static IntMatrix from(const std::vector<std::vector<long>>& rows) {
  IntMatrix m(static_cast<int>(rows.size()),
              rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  return m;
}

TEST_CASE("exact rank") {
  CHECK(exact_rank(from({{1, 1}})) == 1);
  CHECK(exact_rank(from({{1, 0}, {0, 1}})) == 2);
  CHECK(exact_rank(from({{1, 2}, {2, 4}})) == 1);
  CHECK(exact_rank(from({{0, 0}, {0, 0}})) == 0);
  // Third row is the sum of the first two.
  CHECK(exact_rank(from({{2, 3, 5}, {7, 11, 13}, {9, 14, 18}})) == 2);
  CHECK(exact_rank(from({{2, 3, 5}, {7, 11, 13}, {9, 14, 19}})) == 3);
  CHECK(exact_rank(from({{1, 2, 3}, {4, 5, 6}, {5, 7, 9}})) == 2);
}

TEST_CASE("lattice kernel of a row vector") {
  auto k = lattice_kernel(from({{1, 1}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == std::vector<mpz_class>({1, -1}));

  auto k2 = lattice_kernel(from({{2, 3}}));
  REQUIRE(k2.size() == 1);
  CHECK(k2[0] == std::vector<mpz_class>({3, -2}));
}

TEST_CASE("nonsingular square matrix has trivial kernel") {
  CHECK(lattice_kernel(from({{1, 0}, {0, 1}})).empty());
  CHECK(lattice_kernel(from({{2, 1}, {1, 1}})).empty());
}

TEST_CASE("kernel vectors satisfy M u = 0 and span the right count") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 50; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 4);
    int cols = 1 + static_cast<int>(rng() % 6);
    IntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        m.at(r, c) = static_cast<long>(rng() % 7) - 3;
    auto kernel = lattice_kernel(m);
    int rank = exact_rank(m);
    CHECK(static_cast<int>(kernel.size()) == cols - rank);
    for (const auto& v : kernel) {
      auto img = m.apply(v);
      for (const auto& x : img) CHECK(x == 0);
      bool nonzero = false;
      for (const auto& x : v) nonzero |= x != 0;
      CHECK(nonzero);
    }
    CHECK(exact_rank(m) == rank_mod_p(m));
  }
}

TEST_CASE("kernel lattice is saturated: primitive vectors stay primitive") {
  // Kernel of [1 1 1] should contain difference vectors, not multiples.
  auto k = lattice_kernel(from({{1, 1, 1}}));
  REQUIRE(k.size() == 2);
  for (const auto& v : k) {
    mpz_class g = 0;
    for (const auto& x : v) g = gcd(g, x);
    CHECK(g == 1);
  }
}

TEST_CASE("rank mod p agrees on structured matrices") {
  auto m = from({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}});
  CHECK(exact_rank(m) == 3);
  CHECK(rank_mod_p(m) == 3);
}

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "trektoric/toric.hpp"

using namespace trektoric;

namespace {

IntMatrix matrix_from(const std::vector<std::vector<long>>& rows) {
  IntMatrix m(static_cast<int>(rows.size()),
              static_cast<int>(rows.empty() ? 0 : rows[0].size()));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  return m;
}

std::vector<Poly> binomials_as_polys(const std::vector<Binomial>& bs,
                                     const RingPtr& ring) {
  std::vector<Poly> out;
  for (const Binomial& b : bs) out.push_back(binomial_to_poly(b, ring));
  MonoOrder ord = degrevlex(*ring);
  normalize_generators(out, ord);
  return out;
}

// Column index of the covariance pair (i, j) in an exponent matrix.
int column_of(const ExponentMatrix& em, int i, int j) {
  if (i > j) std::swap(i, j);
  for (size_t c = 0; c < em.columns.size(); ++c)
    if (em.columns[c] == Edge{i, j}) return static_cast<int>(c);
  throw std::runtime_error("no such column");
}

Mono pair_mono(const ExponentMatrix& em, std::vector<std::pair<int, int>> ps) {
  Mono m(em.M.cols, 0);
  for (auto [i, j] : ps) m[column_of(em, i, j)] += 1;
  return m;
}

}  // namespace

TEST_CASE("markov basis of a single homogeneous relation") {
  Budget budget(Budget::default_steps());
  auto mb = markov_basis(matrix_from({{1, 1}}), budget);
  RingPtr r = make_ring({"x", "y"});
  CHECK(binomials_as_polys(mb, r) ==
        std::vector<Poly>{parse_poly(r, "x - y")});

  auto mb3 = markov_basis(matrix_from({{1, 1, 1}}), budget);
  RingPtr r3 = make_ring({"x", "y", "z"});
  std::vector<Poly> expected{parse_poly(r3, "y - z"), parse_poly(r3, "x - z")};
  MonoOrder ord = degrevlex(*r3);
  normalize_generators(expected, ord);
  CHECK(binomials_as_polys(mb3, r3) == expected);

  auto mb1 = markov_basis(matrix_from({{2, 3}}), budget);
  RingPtr r2 = make_ring({"x", "y"});
  CHECK(binomials_as_polys(mb1, r2) ==
        std::vector<Poly>{parse_poly(r2, "x^3 - y^2")});
}

TEST_CASE("markov basis saturates the kernel ideal") {
  // The monomial curve (1, t, t^2, t^3): the integer kernel has rank two,
  // but the lattice ideal needs three generators; the third appears only
  // through saturation.
  Budget budget(Budget::default_steps());
  IntMatrix M = matrix_from({{1, 1, 1, 1}, {0, 1, 2, 3}});
  REQUIRE(lattice_kernel(M).size() == 2);
  auto mb = markov_basis(M, budget);
  RingPtr r = make_ring({"a", "b", "c", "d"});
  std::vector<Poly> expected{parse_poly(r, "c^2 - b*d"),
                             parse_poly(r, "b*c - a*d"),
                             parse_poly(r, "b^2 - a*c")};
  MonoOrder ord = degrevlex(*r);
  normalize_generators(expected, ord);
  CHECK(binomials_as_polys(mb, r) == expected);
}

TEST_CASE("markov basis agrees with generic saturation") {
  Budget budget(Budget::default_steps());
  for (const auto& rows : std::vector<std::vector<std::vector<long>>>{
           {{1, 1, 1, 1}, {0, 1, 2, 3}},
           {{3, 2, 1, 0}, {0, 1, 2, 3}},
           {{1, 1, 1}, {0, 1, 2}},
       }) {
    IntMatrix M = matrix_from(rows);
    std::vector<std::string> names;
    for (int c = 0; c < M.cols; ++c) names.push_back("x" + std::to_string(c));
    RingPtr ring = make_ring(names);
    // Independent route: seed with kernel binomials, then saturate by every
    // variable with the generic inverse-adjoining construction.
    std::vector<Poly> gens;
    for (const auto& u : lattice_kernel(M)) {
      Mono p(M.cols, 0), q(M.cols, 0);
      for (int k = 0; k < M.cols; ++k) {
        long e = u[k].get_si();
        if (e > 0) p[k] = static_cast<int>(e);
        if (e < 0) q[k] = static_cast<int>(-e);
      }
      gens.push_back(Poly::monomial(ring, p, 1) - Poly::monomial(ring, q, 1));
    }
    for (int v = 0; v < M.cols; ++v)
      gens = saturate_generic(gens, v, ring, budget);
    auto mb = binomials_as_polys(markov_basis(M, budget), ring);
    CHECK(ideal_equal(gens, mb, ring, budget));
  }
}

TEST_CASE("markov basis input validation and determinism") {
  Budget budget(Budget::default_steps());
  REQUIRE_THROWS_AS(markov_basis(matrix_from({{1, -1}}), budget), Error);
  REQUIRE_THROWS_AS(markov_basis(matrix_from({{1, 0}}), budget), Error);
  try {
    markov_basis(matrix_from({{1, 0}}), budget);
  } catch (const Error& e) {
    CHECK(e.code() == "InvalidExponentMatrix");
  }
  IntMatrix M = matrix_from({{1, 1, 1, 1}, {0, 1, 2, 3}});
  auto a = markov_basis(M, budget);
  auto b = markov_basis(M, budget);
  REQUIRE(a.size() == b.size());
  for (size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].lead == b[k].lead);
    CHECK(a[k].tail == b[k].tail);
  }
}

TEST_CASE("trek ideal of the chain with a split") {
  Budget budget(Budget::default_steps());
  auto pres = st_ideal(g_chain_split(), budget);
  RingPtr sr = pres.ring;
  std::vector<Poly> expected{
      parse_poly(sr, "s1_2*s2_3 - s1_3*s2_2"),
      parse_poly(sr, "s1_2*s2_4 - s1_4*s2_2"),
      parse_poly(sr, "s1_3*s2_4 - s1_4*s2_3"),
  };
  MonoOrder ord = degrevlex(*sr);
  normalize_generators(expected, ord);
  CHECK(pres.gens == expected);
  CHECK(pres.provenance == "markov");
  // It coincides with the vanishing ideal for this graph.
  auto vi = vanishing_ideal(g_chain_split(), budget);
  CHECK(ideal_equal(pres.gens, vi.gens, sr, budget));
}

TEST_CASE("trek ideal of the five-vertex crossing") {
  Budget budget(Budget::default_steps());
  Dag g = g_cycle5();  // 1->3, 1->5, 2->3, 2->4, 4->5
  auto pres = st_ideal(g, budget);
  RingPtr sr = pres.ring;
  std::vector<Poly> expected{
      parse_poly(sr, "s1_4"),
      parse_poly(sr, "s1_2"),
      parse_poly(sr, "s1_3*s1_5 - s1_1*s3_5"),
      parse_poly(sr, "s2_3*s2_4 - s2_2*s3_4"),
      parse_poly(sr, "s2_4*s4_5 - s4_4*s2_5"),
  };
  MonoOrder ord = degrevlex(*sr);
  normalize_generators(expected, ord);
  REQUIRE(pres.gens.size() == 5);
  CHECK(pres.gens == expected);
}

TEST_CASE("trek ideal edge cases") {
  Budget budget(Budget::default_steps());
  REQUIRE_THROWS_AS(st_ideal(g_fan4(), budget), Error);
  CHECK(st_ideal(g_complete(4), budget).gens.empty());
  auto pres = st_ideal(g_block1(), budget);
  RingPtr sr = pres.ring;
  std::vector<Poly> expected{parse_poly(sr, "s1_2"), parse_poly(sr, "s1_3")};
  MonoOrder ord = degrevlex(*sr);
  normalize_generators(expected, ord);
  CHECK(pres.gens == expected);
}

TEST_CASE("markov binomials preserve the exponent vector") {
  Budget budget(Budget::default_steps());
  for (const Dag& g : {g_chain_split(), g_collider_chain(), g_block1(),
                       g_cycle5(), g_path(4)}) {
    auto em = exponent_matrix(g);
    for (const Binomial& b : markov_basis(em.M, budget)) {
      REQUIRE(b.tail.has_value());
      REQUIRE(em.M.apply_int(b.lead) == em.M.apply_int(*b.tail));
    }
  }
}

TEST_CASE("fibers of the chain with a split") {
  Budget budget(Budget::default_steps());
  auto em = exponent_matrix(g_chain_split());
  const IntMatrix& M = em.M;

  auto b = M.apply_int(pair_mono(em, {{1, 2}, {2, 3}}));
  auto f = fiber(M, b, budget);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == pair_mono(em, {{1, 3}, {2, 2}}));
  CHECK(f[1] == pair_mono(em, {{1, 2}, {2, 3}}));

  auto fd = fiber(M, M.apply_int(pair_mono(em, {{1, 1}})), budget);
  REQUIRE(fd.size() == 1);
  CHECK(fd[0] == pair_mono(em, {{1, 1}}));

  auto f0 = fiber(M, std::vector<mpz_class>(M.rows, 0), budget);
  REQUIRE(f0.size() == 1);
  CHECK(f0[0] == Mono(M.cols, 0));

  std::vector<mpz_class> neg(M.rows, 0);
  neg[0] = -1;
  CHECK(fiber(M, neg, budget).empty());

  REQUIRE_THROWS_AS(fiber(M, std::vector<mpz_class>(3, 0), budget), Error);
  REQUIRE_THROWS_AS(fiber(M, b, budget, 1), Error);
}

TEST_CASE("fiber connectivity under independence moves") {
  Budget budget(Budget::default_steps());
  auto em = exponent_matrix(g_chain_split());
  MonoOrder ord = detail::column_degrevlex(em.M.cols);
  // The two single-vertex separation moves of this graph.
  auto mk = [&](std::vector<std::pair<int, int>> u,
                std::vector<std::pair<int, int>> v) {
    return *make_binomial(pair_mono(em, u), pair_mono(em, v), ord);
  };
  std::vector<Binomial> moves{
      mk({{1, 2}, {2, 3}}, {{1, 3}, {2, 2}}),
      mk({{1, 2}, {2, 4}}, {{1, 4}, {2, 2}}),
  };
  auto b =
      em.M.apply_int(pair_mono(em, {{1, 2}, {1, 2}, {2, 4}, {2, 3}}));
  auto rep = fiber_connected(em.M, b, moves, budget);
  CHECK(rep.connected);
  bool has_start = false, has_end = false;
  for (const Mono& m : rep.elements) {
    if (m == pair_mono(em, {{1, 2}, {1, 2}, {2, 4}, {2, 3}})) has_start = true;
    if (m == pair_mono(em, {{2, 2}, {2, 2}, {1, 3}, {1, 4}})) has_end = true;
  }
  CHECK(has_start);
  CHECK(has_end);

  // Without moves a two-element fiber splits.
  auto b2 = em.M.apply_int(pair_mono(em, {{1, 2}, {2, 3}}));
  auto rep2 = fiber_connected(em.M, b2, {}, budget);
  CHECK_FALSE(rep2.connected);
  REQUIRE(rep2.witness.has_value());
  CHECK(rep2.witness->first != rep2.witness->second);

  auto rep3 = fiber_connected(em.M, b2, moves, budget);
  CHECK(rep3.connected);
}

TEST_CASE("move sets generating the trek ideal up to a degree") {
  Budget budget(Budget::default_steps());
  auto em = exponent_matrix(g_chain_split());
  auto mb = markov_basis(em.M, budget);
  REQUIRE(mb.size() == 3);

  auto all4 = verify_generates(em.M, mb, 4, budget);
  CHECK(all4.generates);
  CHECK(all4.degree_bound == 4);

  // The single move exchanging s1_2*s2_3 and s1_3*s2_2 misses the fiber
  // that contains s1_2*s2_4.
  Mono a = pair_mono(em, {{1, 2}, {2, 3}});
  Mono bm = pair_mono(em, {{1, 3}, {2, 2}});
  std::vector<Binomial> one;
  for (const Binomial& b : mb)
    if ((b.lead == a && b.tail == bm) || (b.lead == bm && b.tail == a))
      one.push_back(b);
  REQUIRE(one.size() == 1);
  auto partial = verify_generates(em.M, one, 2, budget);
  REQUIRE_FALSE(partial.generates);
  REQUIRE(partial.witness.has_value());
  REQUIRE(partial.witness_value.has_value());
  // The reported fiber is indeed split for these moves.
  auto split = fiber_connected(em.M, *partial.witness_value, one, budget);
  CHECK_FALSE(split.connected);

  auto all3 = verify_generates(em.M, mb, 3, budget);
  CHECK(all3.generates);
}

TEST_CASE("equality certificates between vanishing and trek ideals") {
  Budget budget(Budget::default_steps());

  auto ok = certify_I_equals_ST(g_chain_split(), budget);
  CHECK(ok.result == "IequalsST");
  CHECK(ok.assumptions.size() == 1);
  CHECK_FALSE(ok.evidence.empty());

  auto blocked = certify_I_equals_ST(g_block1(), budget);
  CHECK(blocked.result == "IequalsST");

  auto complete = certify_I_equals_ST(g_complete(4), budget);
  CHECK(complete.result == "IequalsST");

  auto bad = certify_I_equals_ST(g_cycle5(), budget);
  CHECK(bad.result == "NotEqual");
  REQUIRE_FALSE(bad.evidence.empty());
  CHECK(bad.evidence[0].find("does not vanish") != std::string::npos);

  auto undef = certify_I_equals_ST(g_fan4(), budget);
  CHECK(undef.result == "NotEqual");
  REQUIRE_FALSE(undef.evidence.empty());
  CHECK(undef.evidence[0].find("undefined") != std::string::npos);
}

TEST_CASE("certificates between trek and independence ideals") {
  Budget budget(Budget::default_steps());

  auto ok = certify_ST_equals_CI(g_chain_split(), 4, budget);
  CHECK(ok.result == "STequalsCI");
  CHECK(ok.assumptions.size() == 1);

  auto path = certify_ST_equals_CI(g_path(3), 4, budget);
  CHECK(path.result == "STequalsCI");

  // The collider chain has a trek binomial (joining 1 and 4 through 3)
  // but no single-vertex separation at all, so the moves miss it.
  auto gap = certify_ST_equals_CI(g_collider_chain(), 4, budget);
  CHECK(gap.result == "NotEqual");
  bool mentions_fiber = false;
  for (const auto& e : gap.evidence)
    if (e.find("not connected") != std::string::npos) mentions_fiber = true;
  CHECK(mentions_fiber);

  auto undef = certify_ST_equals_CI(g_fan4(), 4, budget);
  CHECK(undef.result == "NotEqual");
}

#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "helpers.hpp"
#include "trektoric/trek.hpp"

using namespace trektoric;

TEST_CASE("treks between 3 and 4 in the fan") {
  Dag g = g_fan4();
  auto ts = treks(g, 3, 4);
  REQUIRE(ts.size() == 4);
  // Deterministic order: by length, then by path sequence read from i to j.
  CHECK(ts[0] == Trek{1, {1, 3}, {1, 4}});
  CHECK(ts[1] == Trek{2, {2, 3}, {2, 4}});
  CHECK(ts[2] == Trek{1, {1, 3}, {1, 2, 4}});
  CHECK(ts[3] == Trek{1, {1, 2, 3}, {1, 4}});
  CHECK(trek_text(g, ts[0]) == "3 <- 1 -> 4");
  CHECK(trek_text(g, ts[2]) == "3 <- 1 -> 2 -> 4");
  CHECK(trek_text(g, ts[3]) == "3 <- 2 <- 1 -> 4");
  CHECK(ts[0].length() == 2);
  CHECK(ts[2].length() == 3);
}

TEST_CASE("a directed path is a trek with the top at one end") {
  Dag g = g_path(3);
  auto ts = treks(g, 1, 3);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0] == Trek{1, {1}, {1, 2, 3}});
  CHECK(trek_text(g, ts[0]) == "1 -> 2 -> 3");
}

TEST_CASE("trek endpoints equal gives the trivial trek") {
  Dag g = g_fan4();
  auto ts = treks(g, 2, 2);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0] == Trek{2, {2}, {2}});
  CHECK(ts[0].length() == 0);
  CHECK(trek_text(g, ts[0]) == "2");
}

TEST_CASE("colliders block treks") {
  // 1 -> 3 <- 2: no colliderless path between 1 and 2.
  CHECK(treks(g_collider_chain(), 1, 2).empty());
  CHECK_FALSE(trek_connected(g_collider_chain(), 1, 2));
  CHECK(trek_connected(g_collider_chain(), 1, 4));
}

TEST_CASE("trek endpoint range checked") {
  CHECK_THROWS_WITH(treks(g_path(2), 0, 1),
                    Catch::Matchers::ContainsSubstring("VertexOutOfRange"));
  CHECK_THROWS_WITH(treks(g_path(2), 1, 5),
                    Catch::Matchers::ContainsSubstring("VertexOutOfRange"));
}

TEST_CASE("shortest trek: unique, missing, ambiguous") {
  Dag g = g_chain_split();
  auto r = shortest_trek(g, 3, 4);
  REQUIRE(std::holds_alternative<Trek>(r));
  CHECK(std::get<Trek>(r) == Trek{3, {3}, {3, 4}});

  auto none = shortest_trek(g_collider_chain(), 1, 2);
  CHECK(std::holds_alternative<NoTrek>(none));

  auto amb = shortest_trek(g_fan4(), 3, 4);
  REQUIRE(std::holds_alternative<AmbiguousShortestTrek>(amb));
  auto w = std::get<AmbiguousShortestTrek>(amb);
  CHECK(w.first == Trek{1, {1, 3}, {1, 4}});
  CHECK(w.second == Trek{2, {2, 3}, {2, 4}});
}

TEST_CASE("every pair in the chain-split graph has a unique shortest trek") {
  Dag g = g_chain_split();
  for (int i = 1; i <= 4; ++i)
    for (int j = i; j <= 4; ++j)
      CHECK(std::holds_alternative<Trek>(shortest_trek(g, i, j)));
}

TEST_CASE("choke points on a path") {
  Dag g = g_path(3);
  auto cps = choke_points(g, {1}, {3});
  REQUIRE(cps.size() == 3);
  CHECK(cps[0] == std::pair<int, ChokeSide>{1, ChokeSide::Both});
  CHECK(cps[1] == std::pair<int, ChokeSide>{2, ChokeSide::J});
  CHECK(cps[2] == std::pair<int, ChokeSide>{3, ChokeSide::J});
}

TEST_CASE("choke points with overlapping sets reduce to the shared vertex") {
  // Glued double fan: 1 feeds everything, 2 and 3 feed the shared tail 4, 5.
  Dag g = dag_n(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 4}, {2, 5},
                    {3, 4}, {3, 5}, {4, 5}});
  auto cps = choke_points(g, {1, 2}, {1, 3});
  REQUIRE(cps.size() == 1);
  CHECK(cps[0] == std::pair<int, ChokeSide>{1, ChokeSide::Both});
  CHECK(is_choke_point(g, 1, {1, 2}, {1, 3}));
  CHECK_FALSE(is_choke_point(g, 4, {1, 2}, {1, 3}));
}

TEST_CASE("no treks means no choke points") {
  CHECK(choke_points(g_collider_chain(), {1}, {2}).empty());
}

TEST_CASE("trek multigraph of monomials") {
  Dag g = g_chain_split();
  // s12^2 * s24 * s23
  auto m1 = trek_multigraph(g, {{{1, 2}, 2}, {{2, 4}, 1}, {{2, 3}, 1}});
  CHECK(m1.edge_mult ==
        std::map<Edge, int>({{{1, 2}, 2}, {{2, 3}, 1}, {{2, 4}, 1}}));
  CHECK(m1.top_mult == std::map<int, int>({{1, 2}, {2, 2}}));
  CHECK(m1.endpoint_deg ==
        std::map<int, int>({{1, 2}, {2, 4}, {3, 1}, {4, 1}}));

  // s22^2 * s13 * s14 traces the same edges with the same endpoint degrees.
  auto m2 = trek_multigraph(g, {{{2, 2}, 2}, {{1, 3}, 1}, {{1, 4}, 1}});
  CHECK(m2.edge_mult == m1.edge_mult);
  CHECK(m2.top_mult == m1.top_mult);
  CHECK(m2.endpoint_deg == m1.endpoint_deg);

  // A trivial trek contributes twice to its endpoint degree.
  auto m3 = trek_multigraph(g, {{{1, 1}, 1}});
  CHECK(m3.edge_mult.empty());
  CHECK(m3.top_mult == std::map<int, int>({{1, 1}}));
  CHECK(m3.endpoint_deg == std::map<int, int>({{1, 2}}));
}

TEST_CASE("trek multigraph rejects undefined factors") {
  CHECK_THROWS_WITH(trek_multigraph(g_collider_chain(), {{{1, 2}, 1}}),
                    Catch::Matchers::ContainsSubstring("NoTrekIndeterminate"));
  CHECK_THROWS_WITH(trek_multigraph(g_fan4(), {{{3, 4}, 1}}),
                    Catch::Matchers::ContainsSubstring("ShortestTrekUndefined"));
}

TEST_CASE("trek enumeration matches a brute-force path scan on small graphs") {
  // Independent oracle: count simple colliderless undirected paths directly.
  std::vector<Dag> graphs = {g_fan4(), g_chain_split(), g_collider_chain(),
                             g_block1(), g_cycle5(), g_complete(4)};
  for (const Dag& g : graphs) {
    for (int i = 1; i <= g.n(); ++i)
      for (int j = 1; j <= g.n(); ++j) {
        if (i == j) continue;
        // Enumerate all simple undirected paths i..j and keep those whose
        // edge orientations have no head-to-head pair.
        int expected = 0;
        std::vector<int> path{i};
        std::vector<bool> used(g.n() + 1, false);
        used[i] = true;
        // Internal numbering is topological, so x -> y exists iff x < y and
        // has_edge(x, y); a collider at path[k] is arrows in from both sides.
        auto arrow_into = [&](int from, int to) {
          return from < to && g.has_edge(from, to);
        };
        std::function<void()> dfs = [&] {
          int v = path.back();
          if (v == j) {
            bool collider = false;
            for (size_t k = 1; k + 1 < path.size(); ++k)
              if (arrow_into(path[k - 1], path[k]) &&
                  arrow_into(path[k + 1], path[k]))
                collider = true;
            if (!collider) ++expected;
            return;
          }
          for (int w = 1; w <= g.n(); ++w) {
            if (used[w] || !g.adjacent(v, w)) continue;
            used[w] = true;
            path.push_back(w);
            dfs();
            path.pop_back();
            used[w] = false;
          }
        };
        dfs();
        CHECK(static_cast<int>(treks(g, i, j).size()) == expected);
      }
  }
}

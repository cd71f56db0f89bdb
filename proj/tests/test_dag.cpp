#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "trektoric/dag.hpp"

using namespace trektoric;

TEST_CASE("construction validates edges") {
  CHECK_NOTHROW(dag_n(3, {{1, 2}, {2, 3}}));
  CHECK_THROWS_WITH(dag_n(2, {{1, 1}}), Catch::Matchers::ContainsSubstring("SelfLoop"));
  CHECK_THROWS_WITH(dag_n(2, {{1, 2}, {1, 2}}),
                    Catch::Matchers::ContainsSubstring("DuplicateEdge"));
  CHECK_THROWS_WITH(dag_n(2, {{1, 3}}),
                    Catch::Matchers::ContainsSubstring("VertexOutOfRange"));
}

TEST_CASE("loader renumbers topologically by depth then label") {
  // "10" sorts before "2" as a string, but depth comes first.
  Dag g = dag_from({"2", "10"}, {{"2", "10"}});
  CHECK(g.n() == 2);
  CHECK(g.label(1) == "2");
  CHECK(g.label(2) == "10");
  CHECK(g.edges() == std::vector<Edge>{{1, 2}});

  // Among equal depths the label decides, as a plain string.
  Dag h = dag_from({"b", "a", "10"}, {});
  CHECK(h.label(1) == "10");
  CHECK(h.label(2) == "a");
  CHECK(h.label(3) == "b");

  // Edge direction is preserved no matter the input listing order.
  Dag k = dag_from({"x", "y", "z"}, {{"z", "y"}, {"y", "x"}});
  CHECK(k.label(1) == "z");
  CHECK(k.label(2) == "y");
  CHECK(k.label(3) == "x");
  CHECK(k.edges() == std::vector<Edge>({{1, 2}, {2, 3}}));
}

TEST_CASE("loader rejects malformed documents") {
  CHECK_THROWS_WITH(load_dag_text("{\"vertices\": [\"a\"]}"),
                    Catch::Matchers::ContainsSubstring("MalformedDocument"));
  CHECK_THROWS_WITH(load_dag_text("not json"),
                    Catch::Matchers::ContainsSubstring("MalformedDocument"));
  CHECK_THROWS_WITH(
      load_dag_text(
          "{\"vertices\": [\"a\",\"b\"], \"edges\": [[\"a\",\"c\"]]}"),
      Catch::Matchers::ContainsSubstring("VertexOutOfRange"));
  CHECK_THROWS_WITH(
      load_dag_text(
          "{\"vertices\": [\"a\",\"b\"], \"edges\": [[\"a\",\"a\"]]}"),
      Catch::Matchers::ContainsSubstring("SelfLoop"));
}

TEST_CASE("loader reports a directed cycle witness") {
  try {
    dag_from({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
    FAIL("expected CycleDetected");
  } catch (const Error& e) {
    CHECK(e.code() == "CycleDetected");
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("a -> b -> c -> a"));
  }
}

TEST_CASE("save and load round trip") {
  Dag g = g_collider_chain();
  Dag h = load_dag(save_dag(g));
  CHECK(g == h);
  CHECK(h.label(4) == "4");
}

TEST_CASE("structural equality ignores labels") {
  Dag a = dag_from({"p", "q"}, {{"p", "q"}});
  Dag b = dag_from({"1", "2"}, {{"1", "2"}});
  CHECK(a == b);
  CHECK(a != g_path(3));
}

TEST_CASE("family queries") {
  Dag g = g_chain_split();
  CHECK(g.parents(4) == std::vector<int>({2, 3}));
  CHECK(g.children(2) == std::vector<int>({3, 4}));
  CHECK(g.ancestors(4) == std::set<int>({1, 2, 3, 4}));
  CHECK(g.descendants(2) == std::set<int>({2, 3, 4}));
  CHECK(g.sources() == std::vector<int>({1}));
  CHECK(g.sinks() == std::vector<int>({4}));
}

TEST_CASE("induced subgraph keeps labels and renumbers") {
  Dag g = g_chain_split();
  Dag s = g.induced({2, 3, 4});
  CHECK(s.n() == 3);
  CHECK(s.edges() == std::vector<Edge>({{1, 2}, {1, 3}, {2, 3}}));
  CHECK(s.label(1) == "2");
}

TEST_CASE("cliques") {
  Dag g = g_complete(4);
  CHECK(g.is_clique({1, 2, 3, 4}));
  CHECK(g_chain_split().is_clique({2, 3, 4}));
  CHECK_FALSE(g_chain_split().is_clique({1, 3, 4}));
}

TEST_CASE("unshielded colliders") {
  CHECK(g_collider_chain().unshielded_colliders() ==
        std::vector<std::array<int, 3>>({{1, 2, 3}}));
  // Parents 2, 3 of 4 are adjacent, so the collider at 4 is shielded.
  CHECK(g_chain_split().unshielded_colliders().empty());
  // The fan has no unshielded collider either: all parent pairs adjacent.
  CHECK(g_fan4().unshielded_colliders().empty());
}

TEST_CASE("block graph skeletons") {
  CHECK(g_complete(4).skeleton_is_block_graph());
  CHECK(g_path(5).skeleton_is_block_graph());
  // Triangle {2,3,4} plus pendant edge 1-3: every block is a clique.
  CHECK(g_collider_chain().skeleton_is_block_graph());
  // Four-cycle without a chord is a block that is not a clique.
  CHECK_FALSE(dag_n(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}}).skeleton_is_block_graph());
  // Fan: one block on all four vertices, but 3-4 is missing.
  CHECK_FALSE(g_fan4().skeleton_is_block_graph());
}

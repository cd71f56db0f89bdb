#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "trektoric/dag.hpp"

namespace tt = trektoric;

// Build a graph from user labels and labeled edges (goes through the JSON
// loader, so tests exercise the same numbering path as file input).
inline tt::Dag dag_from(const std::vector<std::string>& vertices,
                        const std::vector<std::pair<std::string, std::string>>&
                            edges) {
  nlohmann::json doc;
  doc["vertices"] = vertices;
  doc["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : edges) doc["edges"].push_back({a, b});
  return tt::load_dag(doc);
}

inline tt::Dag dag_n(int n, const std::vector<tt::Edge>& edges) {
  return tt::Dag(n, edges);
}

// --- fixture graphs --------------------------------------------------------

// Fan on four vertices: 1 and 2 both feed 3 and 4, plus 1 -> 2.  The pair
// (3, 4) has two shortest treks, so the shortest trek map is undefined.
inline tt::Dag g_fan4() {
  return dag_n(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}});
}

// Chain 1 -> 2 that splits into 3 and 4 with 3 -> 4.
inline tt::Dag g_chain_split() {
  return dag_n(4, {{1, 2}, {2, 3}, {2, 4}, {3, 4}});
}

// Collider at 3 (parents 1, 2), then 3 -> 4 and 2 -> 4.
inline tt::Dag g_collider_chain() {
  return dag_n(4, {{1, 3}, {2, 3}, {2, 4}, {3, 4}});
}

// 1 and 2, 3 jointly feeding 4; 1 -> 4 only.
inline tt::Dag g_block1() {
  return dag_n(4, {{1, 4}, {2, 3}, {2, 4}, {3, 4}});
}

// Five-cycle skeleton: two sources 1, 2 over sinks 3, 5 via 4.
inline tt::Dag g_cycle5() {
  return dag_n(5, {{1, 3}, {1, 5}, {2, 3}, {2, 4}, {4, 5}});
}

inline tt::Dag g_path(int n) {
  std::vector<tt::Edge> es;
  for (int v = 1; v < n; ++v) es.push_back({v, v + 1});
  return dag_n(n, es);
}

inline tt::Dag g_complete(int n) {
  std::vector<tt::Edge> es;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) es.push_back({i, j});
  return dag_n(n, es);
}

inline std::set<int> verts(const tt::Dag& g,
                           const std::vector<std::string>& labels) {
  std::set<int> s;
  for (const auto& l : labels) s.insert(g.vertex_by_label(l));
  return s;
}

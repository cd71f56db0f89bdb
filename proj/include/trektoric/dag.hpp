#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trektoric/budget.hpp"

namespace trektoric {

using Edge = std::pair<int, int>;  // (i, j) encodes the arrow i -> j, i < j.

// Directed acyclic graph on vertices 1..n.  The internal numbering is
// topological: every edge points from a smaller number to a larger one.
// User-facing labels are kept alongside and used for all input and output.
class Dag {
 public:
  Dag() = default;

  // Edges must already satisfy i < j (the canonical numbering).
  Dag(int n, std::vector<Edge> edges,
      std::vector<std::string> labels = {})
      : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      for (int v = 1; v <= n_; ++v) labels_.push_back(std::to_string(v));
    }
    if (static_cast<int>(labels_.size()) != n_)
      throw make_error("MalformedDocument", "label count differs from n");
    std::sort(edges_.begin(), edges_.end());
    for (auto& [i, j] : edges_) {
      if (i < 1 || j < 1 || i > n_ || j > n_)
        throw make_error("VertexOutOfRange", "edge endpoint outside 1..n");
      if (i == j) throw make_error("SelfLoop", "self loop at " + label(i));
      if (i > j)
        throw make_error("MalformedDocument",
                         "edge not in canonical smaller->larger form");
    }
    for (size_t k = 1; k < edges_.size(); ++k)
      if (edges_[k] == edges_[k - 1])
        throw make_error("DuplicateEdge",
                         "duplicate edge " + label(edges_[k].first) + "->" +
                             label(edges_[k].second));
    build_adjacency();
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& label(int v) const { return labels_.at(v - 1); }
  const std::vector<std::string>& labels() const { return labels_; }

  int vertex_by_label(const std::string& s) const {
    for (int v = 1; v <= n_; ++v)
      if (labels_[v - 1] == s) return v;
    throw make_error("VertexOutOfRange", "unknown vertex label " + s);
  }

  bool has_edge(int i, int j) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }
  bool adjacent(int i, int j) const {
    return has_edge(std::min(i, j), std::max(i, j));
  }

  const std::vector<int>& parents(int v) const { return parents_.at(v - 1); }
  const std::vector<int>& children(int v) const { return children_.at(v - 1); }

  // Ancestors / descendants include the vertex itself.
  std::set<int> ancestors(int v) const { return closure(v, parents_); }
  std::set<int> descendants(int v) const { return closure(v, children_); }

  std::set<int> ancestors(const std::set<int>& s) const {
    std::set<int> out;
    for (int v : s) {
      auto a = ancestors(v);
      out.insert(a.begin(), a.end());
    }
    return out;
  }

  std::vector<int> sources() const {
    std::vector<int> out;
    for (int v = 1; v <= n_; ++v)
      if (parents(v).empty()) out.push_back(v);
    return out;
  }
  std::vector<int> sinks() const {
    std::vector<int> out;
    for (int v = 1; v <= n_; ++v)
      if (children(v).empty()) out.push_back(v);
    return out;
  }

  bool is_clique(const std::set<int>& s) const {
    for (int a : s)
      for (int b : s)
        if (a < b && !adjacent(a, b)) return false;
    return true;
  }

  // Induced subgraph, returned with the induced vertices renumbered 1..|s|
  // in increasing order of their old numbers; labels are carried over.
  Dag induced(const std::set<int>& s) const {
    std::map<int, int> renum;
    std::vector<std::string> labs;
    int k = 0;
    for (int v : s) {
      if (v < 1 || v > n_)
        throw make_error("VertexOutOfRange", "induced vertex outside 1..n");
      renum[v] = ++k;
      labs.push_back(label(v));
    }
    std::vector<Edge> es;
    for (auto [i, j] : edges_)
      if (s.count(i) && s.count(j)) es.push_back({renum[i], renum[j]});
    return Dag(k, es, labs);
  }

  // Unshielded colliders (i, j, k): i and j are nonadjacent parents of k.
  std::vector<std::array<int, 3>> unshielded_colliders() const {
    std::vector<std::array<int, 3>> out;
    for (int k = 1; k <= n_; ++k) {
      const auto& ps = parents(k);
      for (size_t a = 0; a < ps.size(); ++a)
        for (size_t b = a + 1; b < ps.size(); ++b)
          if (!adjacent(ps[a], ps[b])) out.push_back({ps[a], ps[b], k});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Whether every biconnected component of the undirected skeleton is a
  // clique (equivalently, every cycle in the skeleton is filled in).
  bool skeleton_is_block_graph() const {
    for (const auto& comp : biconnected_components())
      if (!is_clique(comp)) return false;
    return true;
  }

  std::vector<std::set<int>> biconnected_components() const {
    std::vector<std::set<int>> comps;
    std::vector<int> disc(n_ + 1, 0), low(n_ + 1, 0);
    std::vector<Edge> stack;
    int timer = 0;
    std::vector<std::vector<int>> adj(n_ + 1);
    for (auto [i, j] : edges_) {
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
    // Iterative DFS computing lowpoints and popping edge stacks at cuts.
    struct Frame {
      int v, parent;
      size_t next = 0;
    };
    for (int root = 1; root <= n_; ++root) {
      if (disc[root]) continue;
      std::vector<Frame> st{{root, 0}};
      disc[root] = low[root] = ++timer;
      while (!st.empty()) {
        Frame& f = st.back();
        if (f.next < adj[f.v].size()) {
          int w = adj[f.v][f.next++];
          if (w == f.parent) continue;
          if (!disc[w]) {
            stack.push_back({f.v, w});
            disc[w] = low[w] = ++timer;
            st.push_back({w, f.v});
          } else if (disc[w] < disc[f.v]) {
            stack.push_back({f.v, w});
            low[f.v] = std::min(low[f.v], disc[w]);
          }
        } else {
          int v = f.v, parent = f.parent;
          st.pop_back();
          if (!st.empty()) {
            low[parent] = std::min(low[parent], low[v]);
            if (low[v] >= disc[parent]) {
              std::set<int> comp;
              while (!stack.empty()) {
                auto [a, b] = stack.back();
                if (disc[a] < disc[v] && a != parent && b != v) break;
                stack.pop_back();
                comp.insert(a);
                comp.insert(b);
                if (a == parent && b == v) break;
              }
              if (!comp.empty()) comps.push_back(comp);
            }
          }
        }
      }
    }
    return comps;
  }

  // Structural equality: same size and same internal edge set.  Labels are
  // deliberately ignored so that reloaded and renamed copies compare equal.
  bool operator==(const Dag& o) const {
    return n_ == o.n_ && edges_ == o.edges_;
  }
  bool operator!=(const Dag& o) const { return !(*this == o); }

 private:
  std::set<int> closure(int v, const std::vector<std::vector<int>>& step) const {
    if (v < 1 || v > n_)
      throw make_error("VertexOutOfRange", "vertex outside 1..n");
    std::set<int> seen{v};
    std::vector<int> todo{v};
    while (!todo.empty()) {
      int u = todo.back();
      todo.pop_back();
      for (int w : step[u - 1])
        if (seen.insert(w).second) todo.push_back(w);
    }
    return seen;
  }

  void build_adjacency() {
    parents_.assign(n_, {});
    children_.assign(n_, {});
    for (auto [i, j] : edges_) {
      children_[i - 1].push_back(j);
      parents_[j - 1].push_back(i);
    }
    for (auto& v : parents_) std::sort(v.begin(), v.end());
    for (auto& v : children_) std::sort(v.begin(), v.end());
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> parents_, children_;
};

// ---------------------------------------------------------------------------
// JSON load / save.
//
// Document shape: {"vertices": ["a", "b", ...], "edges": [["a","b"], ...]}.
// Vertices may be strings or numbers (numbers are canonicalized to their
// decimal text).  Cycles, self loops, duplicate edges and unknown endpoints
// are rejected.  The loaded graph is renumbered topologically, stably by
// (longest-path depth, label), so output is deterministic for any input
// order.
// ---------------------------------------------------------------------------

inline std::string json_vertex_name(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw make_error("MalformedDocument", "vertex name must be string or integer");
}

inline Dag load_dag(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw make_error("MalformedDocument",
                     "expected object with \"vertices\" and \"edges\"");
  std::vector<std::string> names;
  std::map<std::string, int> index;  // name -> position in `names`
  for (const auto& v : doc["vertices"]) {
    std::string s = json_vertex_name(v);
    if (index.count(s))
      throw make_error("MalformedDocument", "duplicate vertex " + s);
    index[s] = static_cast<int>(names.size());
    names.push_back(s);
  }
  int n = static_cast<int>(names.size());
  std::vector<std::pair<int, int>> raw;  // positions, direction kept
  std::set<std::pair<int, int>> seen;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2)
      throw make_error("MalformedDocument", "edge must be a pair");
    std::string a = json_vertex_name(e[0]), b = json_vertex_name(e[1]);
    if (!index.count(a))
      throw make_error("VertexOutOfRange", "unknown vertex label " + a);
    if (!index.count(b))
      throw make_error("VertexOutOfRange", "unknown vertex label " + b);
    if (a == b) throw make_error("SelfLoop", "self loop at " + a);
    auto pr = std::make_pair(index[a], index[b]);
    if (!seen.insert(pr).second)
      throw make_error("DuplicateEdge", "duplicate edge " + a + "->" + b);
    raw.push_back(pr);
  }

  // Longest-path depth; a back edge found by Kahn's algorithm means a cycle.
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : raw) {
    out[a].push_back(b);
    indeg[b]++;
  }
  std::vector<int> depth(n, 0), order;
  std::vector<int> q;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) q.push_back(v);
  std::vector<int> indeg2 = indeg;
  while (!q.empty()) {
    int v = q.back();
    q.pop_back();
    order.push_back(v);
    for (int w : out[v]) {
      depth[w] = std::max(depth[w], depth[v] + 1);
      if (--indeg2[w] == 0) q.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    // Recover one directed cycle for the error message.
    std::vector<int> state(n, 0), stack;
    std::string witness;
    std::function<bool(int)> dfs = [&](int v) -> bool {
      state[v] = 1;
      stack.push_back(v);
      for (int w : out[v]) {
        if (state[w] == 1) {
          auto it = std::find(stack.begin(), stack.end(), w);
          for (; it != stack.end(); ++it)
            witness += names[*it] + " -> ";
          witness += names[w];
          return true;
        }
        if (state[w] == 0 && dfs(w)) return true;
      }
      state[v] = 2;
      stack.pop_back();
      return false;
    };
    for (int v = 0; v < n && witness.empty(); ++v)
      if (state[v] == 0) dfs(v);
    throw make_error("CycleDetected", "directed cycle: " + witness);
  }

  std::vector<int> perm(n);
  for (int v = 0; v < n; ++v) perm[v] = v;
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (depth[a] != depth[b]) return depth[a] < depth[b];
    return names[a] < names[b];
  });
  std::vector<int> newnum(n);  // old position -> 1..n
  std::vector<std::string> labels(n);
  for (int k = 0; k < n; ++k) {
    newnum[perm[k]] = k + 1;
    labels[k] = names[perm[k]];
  }
  std::vector<Edge> edges;
  for (auto [a, b] : raw) edges.push_back({newnum[a], newnum[b]});
  return Dag(n, edges, labels);
}

inline Dag load_dag_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw make_error("MalformedDocument", e.what());
  }
  return load_dag(doc);
}

inline nlohmann::json save_dag(const Dag& g) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (int v = 1; v <= g.n(); ++v) doc["vertices"].push_back(g.label(v));
  doc["edges"] = nlohmann::json::array();
  for (auto [i, j] : g.edges())
    doc["edges"].push_back({g.label(i), g.label(j)});
  return doc;
}

}  // namespace trektoric

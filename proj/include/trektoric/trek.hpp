#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "trektoric/dag.hpp"

namespace trektoric {

// A trek between i and j: a simple path with no collider, decomposed at its
// top (the unique vertex from which both halves point away).  `left` is the
// directed path top -> ... -> i and `right` is top -> ... -> j; both include
// the top, and they share no other vertex.
struct Trek {
  int top = 0;
  std::vector<int> left, right;

  int length() const {
    return static_cast<int>(left.size() + right.size()) - 2;
  }

  // Vertex sequence i, ..., top, ..., j of the underlying path.
  std::vector<int> path() const {
    std::vector<int> p(left.rbegin(), left.rend());
    p.insert(p.end(), right.begin() + 1, right.end());
    return p;
  }

  std::set<int> vertices() const {
    std::set<int> s(left.begin(), left.end());
    s.insert(right.begin(), right.end());
    return s;
  }

  // Graph edges used, as canonical (smaller, larger) pairs with multiplicity
  // one each (the two halves are vertex disjoint apart from the top).
  std::vector<Edge> used_edges() const {
    std::vector<Edge> es;
    for (size_t k = 1; k < left.size(); ++k)
      es.push_back({left[k - 1], left[k]});
    for (size_t k = 1; k < right.size(); ++k)
      es.push_back({right[k - 1], right[k]});
    std::sort(es.begin(), es.end());
    return es;
  }

  bool operator==(const Trek& o) const {
    return top == o.top && left == o.left && right == o.right;
  }
};

inline std::string trek_text(const Dag& g, const Trek& t) {
  std::string s;
  for (size_t k = t.left.size(); k-- > 1;)
    s += g.label(t.left[k]) + " <- ";
  s += g.label(t.top);
  for (size_t k = 1; k < t.right.size(); ++k)
    s += " -> " + g.label(t.right[k]);
  return s;
}

namespace detail {

// All directed paths from t to target, as vertex lists starting at t.
inline void directed_paths(const Dag& g, int t, int target,
                           std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
  if (t == target) {
    out.push_back(cur);
    return;
  }
  for (int w : g.children(t)) {
    if (std::find(cur.begin(), cur.end(), w) != cur.end()) continue;
    if (!g.descendants(w).count(target)) continue;
    cur.push_back(w);
    directed_paths(g, w, target, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> directed_paths(const Dag& g, int from,
                                                    int to) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur{from};
  directed_paths(g, from, to, cur, out);
  return out;
}

}  // namespace detail

// All treks between i and j, i.e. all simple colliderless paths from i to j,
// each decomposed at its top.  Deterministic order: by length, then by the
// lexicographic vertex sequence of the path read from i to j.
// treks(g, i, i) is the trivial trek at i alone.
inline std::vector<Trek> treks(const Dag& g, int i, int j) {
  if (i < 1 || i > g.n() || j < 1 || j > g.n())
    throw make_error("VertexOutOfRange", "trek endpoint outside 1..n");
  if (i == j) return {Trek{i, {i}, {i}}};
  std::vector<Trek> out;
  for (int t = 1; t <= g.n(); ++t) {
    auto desc = g.descendants(t);
    if (!desc.count(i) || !desc.count(j)) continue;
    auto lefts = detail::directed_paths(g, t, i);
    auto rights = detail::directed_paths(g, t, j);
    for (const auto& L : lefts)
      for (const auto& R : rights) {
        bool disjoint = true;
        for (size_t a = 1; a < L.size() && disjoint; ++a)
          for (size_t b = 1; b < R.size(); ++b)
            if (L[a] == R[b]) {
              disjoint = false;
              break;
            }
        if (disjoint) out.push_back(Trek{t, L, R});
      }
  }
  std::sort(out.begin(), out.end(), [](const Trek& a, const Trek& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.path() < b.path();
  });
  return out;
}

inline bool trek_connected(const Dag& g, int i, int j) {
  if (i == j) return true;
  for (int t = 1; t <= g.n(); ++t) {
    auto d = g.descendants(t);
    if (d.count(i) && d.count(j)) return true;
  }
  return false;
}

struct NoTrek {};
struct AmbiguousShortestTrek {
  Trek first, second;  // two distinct treks of the minimal length
};
using ShortestTrekResult = std::variant<Trek, NoTrek, AmbiguousShortestTrek>;

inline ShortestTrekResult shortest_trek(const Dag& g, int i, int j) {
  auto all = treks(g, i, j);
  if (all.empty()) return NoTrek{};
  if (all.size() >= 2 && all[1].length() == all[0].length())
    return AmbiguousShortestTrek{all[0], all[1]};
  return all[0];
}

// Choke points between vertex sets I and J: vertices lying on every trek
// between I and J (trivial treks at shared vertices included) that sit on
// the I side of every trek or on the J side of every trek.  The top of a
// trek counts as belonging to both sides.  No treks at all means no
// constraints can be read off, so the result is empty.
enum class ChokeSide { I, J, Both };

inline std::vector<std::pair<int, ChokeSide>> choke_points(
    const Dag& g, const std::set<int>& I, const std::set<int>& J) {
  std::vector<Trek> all;
  for (int i : I)
    for (int j : J) {
      auto ts = treks(g, i, j);
      all.insert(all.end(), ts.begin(), ts.end());
    }
  if (all.empty()) return {};
  std::vector<std::pair<int, ChokeSide>> out;
  for (int v = 1; v <= g.n(); ++v) {
    bool on_all = true, always_I = true, always_J = true;
    for (const Trek& t : all) {
      bool in_left =
          std::find(t.left.begin(), t.left.end(), v) != t.left.end();
      bool in_right =
          std::find(t.right.begin(), t.right.end(), v) != t.right.end();
      if (!in_left && !in_right) {
        on_all = false;
        break;
      }
      always_I &= in_left;
      always_J &= in_right;
    }
    if (!on_all || (!always_I && !always_J)) continue;
    ChokeSide side = always_I && always_J ? ChokeSide::Both
                     : always_I          ? ChokeSide::I
                                         : ChokeSide::J;
    out.push_back({v, side});
  }
  return out;
}

inline bool is_choke_point(const Dag& g, int c, const std::set<int>& I,
                           const std::set<int>& J) {
  for (auto [v, side] : choke_points(g, I, J))
    if (v == c) return true;
  return false;
}

// The multigraph traced by the unique shortest treks of a monomial in the
// covariance indeterminates: which graph edges are used how often, the
// multiset of trek tops, and the endpoint degree of every vertex (a trivial
// trek at v contributes 2 to v's endpoint degree).
struct TrekMultigraph {
  std::map<Edge, int> edge_mult;
  std::map<int, int> top_mult;
  std::map<int, int> endpoint_deg;
};

// `factors`: covariance index pairs (i <= j) with multiplicity.
inline TrekMultigraph trek_multigraph(
    const Dag& g, const std::vector<std::pair<Edge, int>>& factors) {
  TrekMultigraph m;
  for (auto [pr, mult] : factors) {
    auto [i, j] = pr;
    auto st = shortest_trek(g, i, j);
    if (std::holds_alternative<NoTrek>(st))
      throw make_error("NoTrekIndeterminate",
                       "no trek between " + g.label(i) + " and " + g.label(j));
    if (std::holds_alternative<AmbiguousShortestTrek>(st))
      throw make_error("ShortestTrekUndefined",
                       "tied shortest treks between " + g.label(i) + " and " +
                           g.label(j));
    const Trek& t = std::get<Trek>(st);
    for (Edge e : t.used_edges()) m.edge_mult[e] += mult;
    m.top_mult[t.top] += mult;
    m.endpoint_deg[i] += mult;
    m.endpoint_deg[j] += mult;
  }
  return m;
}

}  // namespace trektoric

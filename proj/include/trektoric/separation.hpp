#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trektoric/dag.hpp"
#include "trektoric/model_maps.hpp"
#include "trektoric/poly.hpp"
#include "trektoric/trek.hpp"

namespace trektoric {

enum class SeparationAlgo { Moralization, PathCheck };

namespace detail {

inline void check_triple(const Dag& g, const std::set<int>& A,
                         const std::set<int>& B, const std::set<int>& C) {
  if (A.empty() || B.empty())
    throw make_error("EmptySet", "separation endpoints must be nonempty");
  for (const std::set<int>* s : {&A, &B, &C})
    for (int v : *s)
      if (v < 1 || v > g.n())
        throw make_error("VertexOutOfRange", "vertex outside 1..n");
  for (int v : A)
    if (B.count(v) || C.count(v))
      throw make_error("SetsNotDisjoint", "sets share vertex " + g.label(v));
  for (int v : B)
    if (C.count(v))
      throw make_error("SetsNotDisjoint", "sets share vertex " + g.label(v));
}

inline bool d_separated_moral(const Dag& g, const std::set<int>& A,
                              const std::set<int>& B, const std::set<int>& C) {
  std::set<int> all;
  all.insert(A.begin(), A.end());
  all.insert(B.begin(), B.end());
  all.insert(C.begin(), C.end());
  std::set<int> an = g.ancestors(all);
  // Moral graph on the ancestral set: skeleton edges plus married parents.
  std::set<std::pair<int, int>> und;
  auto add = [&](int x, int y) {
    if (x > y) std::swap(x, y);
    und.insert({x, y});
  };
  for (auto [i, j] : g.edges())
    if (an.count(i) && an.count(j)) add(i, j);
  for (int v : an)
    for (int p : g.parents(v))
      for (int q : g.parents(v))
        if (p < q && an.count(p) && an.count(q)) add(p, q);
  // Reachability from A avoiding C.
  std::vector<int> todo(A.begin(), A.end());
  std::set<int> seen(A.begin(), A.end());
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    if (C.count(v)) continue;  // conditioned vertices block
    for (auto [x, y] : und) {
      int w = -1;
      if (x == v) w = y;
      if (y == v) w = x;
      if (w < 0 || seen.count(w) || C.count(w)) continue;
      if (B.count(w)) return false;
      seen.insert(w);
      todo.push_back(w);
    }
  }
  for (int b : B)
    if (seen.count(b)) return false;
  return true;
}

inline bool d_separated_paths(const Dag& g, const std::set<int>& A,
                              const std::set<int>& B, const std::set<int>& C) {
  auto arrow_into = [&](int from, int to) {
    return from < to && g.has_edge(from, to);
  };
  auto blocked = [&](const std::vector<int>& path) {
    for (size_t k = 1; k + 1 < path.size(); ++k) {
      bool collider =
          arrow_into(path[k - 1], path[k]) && arrow_into(path[k + 1], path[k]);
      if (!collider && C.count(path[k])) return true;
      if (collider) {
        bool opens = false;
        for (int d : g.descendants(path[k]))
          if (C.count(d)) opens = true;
        if (!opens) return true;
      }
    }
    return false;
  };
  for (int a : A)
    for (int b : B) {
      bool connected = false;
      std::vector<int> path{a};
      std::vector<bool> used(g.n() + 1, false);
      used[a] = true;
      std::function<void()> dfs = [&] {
        if (connected) return;
        int v = path.back();
        if (v == b) {
          if (!blocked(path)) connected = true;
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
      if (connected) return false;
    }
  return true;
}

}  // namespace detail

inline bool d_separated(const Dag& g, const std::set<int>& A,
                        const std::set<int>& B, const std::set<int>& C,
                        SeparationAlgo algo = SeparationAlgo::Moralization) {
  detail::check_triple(g, A, B, C);
  return algo == SeparationAlgo::Moralization
             ? detail::d_separated_moral(g, A, B, C)
             : detail::d_separated_paths(g, A, B, C);
}

// Minimal separating sets for a nonadjacent pair, ordered by size then
// contents.  Adjacent pairs can never be separated.
struct SeparatorReport {
  bool separator_possible = true;
  std::vector<std::set<int>> minimal;  // empty set means marginal independence
};

inline SeparatorReport minimal_separators(const Dag& g, int i, int j) {
  if (i < 1 || i > g.n() || j < 1 || j > g.n() || i == j)
    throw make_error("VertexOutOfRange", "separator endpoints invalid");
  if (g.adjacent(i, j)) return {false, {}};
  std::vector<int> rest;
  for (int v = 1; v <= g.n(); ++v)
    if (v != i && v != j) rest.push_back(v);
  std::vector<std::set<int>> found;
  int m = static_cast<int>(rest.size());
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::set<int> C;
    for (int k = 0; k < m; ++k)
      if (mask & (1 << k)) C.insert(rest[k]);
    bool dominated = false;
    for (const auto& s : found)
      if (std::includes(C.begin(), C.end(), s.begin(), s.end())) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    if (d_separated(g, {i}, {j}, C)) found.push_back(C);
  }
  std::sort(found.begin(), found.end(),
            [](const std::set<int>& a, const std::set<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return {true, found};
}

// Nonadjacent pairs that cannot be separated by any set of size <= 1.
inline std::vector<Edge> pairs_requiring_large_separator(const Dag& g) {
  std::vector<Edge> out;
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i + 1; j <= g.n(); ++j) {
      if (g.adjacent(i, j)) continue;
      bool small = d_separated(g, {i}, {j}, {});
      for (int c = 1; c <= g.n() && !small; ++c)
        if (c != i && c != j && d_separated(g, {i}, {j}, {c})) small = true;
      if (!small) out.push_back({i, j});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Conditional independence ideal: for every d-separation statement
// A _||_ B | C with |C| <= max_c, all (|C|+1)-minors of the covariance
// block indexed by rows A u C and columns B u C.
// ---------------------------------------------------------------------------

// Determinant of a small matrix of polynomials by Laplace expansion.
inline Poly poly_det(const std::vector<std::vector<Poly>>& m,
                     const RingPtr& ring) {
  size_t k = m.size();
  if (k > 5)
    throw make_error("ScopeTooLarge", "symbolic minors beyond 5x5 refused");
  if (k == 0) return Poly::constant(ring, 1);
  if (k == 1) return m[0][0];
  Poly out(ring);
  std::vector<std::vector<Poly>> sub(k - 1, std::vector<Poly>(k - 1));
  for (size_t c = 0; c < k; ++c) {
    for (size_t r = 1; r < k; ++r) {
      size_t cc = 0;
      for (size_t c2 = 0; c2 < k; ++c2) {
        if (c2 == c) continue;
        sub[r - 1][cc++] = m[r][c2];
      }
    }
    Poly term = m[0][c] * poly_det(sub, ring);
    out += (c % 2 == 0) ? term : -term;
  }
  return out;
}

// All k-subsets of a set, in sorted order.
inline void subsets_of_size(const std::vector<int>& pool, size_t k,
                            std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (size_t p = start; p < pool.size(); ++p) {
      cur.push_back(pool[p]);
      rec(p + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

inline Poly covariance_minor(const RingPtr& sr, int n,
                             const std::vector<int>& rows,
                             const std::vector<int>& cols) {
  std::vector<std::vector<Poly>> m(rows.size(),
                                   std::vector<Poly>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c)
      m[r][c] = Poly::variable(sr, sigma_name(rows[r], cols[c]));
  (void)n;
  return poly_det(m, sr);
}

struct CiStatement {
  std::set<int> A, B, C;
};

// Enumerate d-separation statements.  `pairwise` restricts A and B to
// singletons; otherwise all disjoint set triples are scanned.
inline std::vector<CiStatement> separation_statements(const Dag& g, int max_c,
                                                      bool pairwise) {
  std::vector<CiStatement> out;
  int n = g.n();
  if (pairwise) {
    std::vector<int> rest;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        rest.clear();
        for (int v = 1; v <= n; ++v)
          if (v != i && v != j) rest.push_back(v);
        for (int size = 0; size <= max_c; ++size) {
          std::vector<std::vector<int>> cs;
          subsets_of_size(rest, size, cs);
          for (const auto& c : cs) {
            std::set<int> C(c.begin(), c.end());
            if (d_separated(g, {i}, {j}, C))
              out.push_back({{i}, {j}, C});
          }
        }
      }
    return out;
  }
  // All assignments of each vertex to A / B / C / none.
  std::vector<int> assign(n + 1, 0);
  std::function<void(int)> rec = [&](int v) {
    if (v > n) {
      std::set<int> A, B, C;
      for (int u = 1; u <= n; ++u) {
        if (assign[u] == 1) A.insert(u);
        if (assign[u] == 2) B.insert(u);
        if (assign[u] == 3) C.insert(u);
      }
      if (A.empty() || B.empty() || static_cast<int>(C.size()) > max_c)
        return;
      if (*A.begin() > *B.begin()) return;  // unordered pair (A,B): keep one
      if (d_separated(g, A, B, C)) out.push_back({A, B, C});
      return;
    }
    for (int ch = 0; ch < 4; ++ch) {
      assign[v] = ch;
      rec(v + 1);
    }
    assign[v] = 0;
  };
  rec(1);
  return out;
}

inline IdealPresentation ci_ideal(const Dag& g, int max_c,
                                  bool pairwise = false) {
  RingPtr sr = sigma_ring(g.n());
  MonoOrder ord = degrevlex(*sr);
  auto statements = separation_statements(g, max_c, pairwise);
  std::vector<Poly> gens;
  for (const CiStatement& st : statements) {
    std::vector<int> rows(st.A.begin(), st.A.end());
    std::vector<int> cols(st.B.begin(), st.B.end());
    for (int c : st.C) {
      rows.push_back(c);
      cols.push_back(c);
    }
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    size_t k = st.C.size() + 1;
    std::vector<std::vector<int>> rsets, csets;
    subsets_of_size(rows, k, rsets);
    subsets_of_size(cols, k, csets);
    for (const auto& rs : rsets)
      for (const auto& cs : csets)
        gens.push_back(covariance_minor(sr, g.n(), rs, cs));
  }
  normalize_generators(gens, ord);
  return {sr, gens, "separation"};
}

// ---------------------------------------------------------------------------
// Separation moves: the two-by-two minors read off single-vertex
// separations, plus the vanishing covariances read off marginal ones.
// ---------------------------------------------------------------------------

// A two-by-two minor of some statement A _||_ B | {c}: the covariance rows
// are {r1, r2} inside A u {c} and the columns {l1, l2} inside B u {c}, so
// the minor is  s_{r1 l1} s_{r2 l2} - s_{r1 l2} s_{r2 l1}.
struct QuadStatement {
  std::array<int, 2> rows, cols;  // each sorted increasing
  int c = 0;                      // the conditioned vertex that certifies it
};

struct SeparationMoves {
  std::vector<Edge> zero_pairs;  // s_ij with no trek between i and j
  std::vector<QuadStatement> quadrics;
};

inline SeparationMoves separation_moves(const Dag& g) {
  SeparationMoves out;
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i + 1; j <= g.n(); ++j)
      if (!trek_connected(g, i, j)) out.zero_pairs.push_back({i, j});
  int n = g.n();
  std::vector<std::array<int, 2>> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.push_back({i, j});
  for (const auto& R : pairs)
    for (const auto& L : pairs) {
      if (L < R) continue;  // transposing rows and columns repeats the minor
      std::set<int> common;
      for (int r : R)
        if (r == L[0] || r == L[1]) common.insert(r);
      if (common.size() > 1) continue;
      for (int c = 1; c <= n; ++c) {
        if (!common.empty() && *common.begin() != c) continue;
        std::set<int> A{R[0], R[1]}, B{L[0], L[1]};
        A.erase(c);
        B.erase(c);
        if (A.empty() || B.empty()) continue;
        if (d_separated(g, A, B, {c})) {
          out.quadrics.push_back({R, L, c});
          break;  // record the smallest certifying vertex only
        }
      }
    }
  return out;
}

}  // namespace trektoric

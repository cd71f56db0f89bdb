#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "trektoric/budget.hpp"
#include "trektoric/dag.hpp"
#include "trektoric/groebner.hpp"
#include "trektoric/model_maps.hpp"
#include "trektoric/poly.hpp"
#include "trektoric/separation.hpp"
#include "trektoric/toric.hpp"
#include "trektoric/trek.hpp"

namespace trektoric {

// ---------------------------------------------------------------------------
// Gluing two graphs along a shared clique with a distinguished choke vertex.
//
// The two graphs are identified along equal vertex labels.  The shared set C
// must induce the same complete DAG in both graphs, and one vertex c in C is
// singled out: writing D = C \ {c}, the glued graph is accepted when either
// no trek joins V(G1) \ C to V(G2) \ C at all, or every trek joining
// V(G1) \ D to V(G2) \ D passes through c (on a consistent side) and avoids
// D entirely.  Under these conditions the covariance structure of the glued
// graph factors through the two sides and the choke vertex.
// ---------------------------------------------------------------------------
struct GluingSpec {
  Dag g1, g2;
  std::vector<std::string> shared;  // labels of the identified clique C
  std::string choke;                // label of the choke vertex c, in C
};

enum class GlueSide { G1, G2 };

// A validated gluing: the glued graph plus both sides, the shared clique and
// the choke vertex, all in the glued graph's numbering.
struct GlueContext {
  Dag glued;
  std::set<int> v1, v2;      // the two sides
  std::set<int> shared;      // the identified clique C
  int c = 0;                 // the choke vertex
  bool cross_treks = false;  // whether any trek joins V1 \ C to V2 \ C
};

namespace detail {

inline void check_unique_labels(const Dag& g, const char* which) {
  std::set<std::string> seen;
  for (const auto& s : g.labels())
    if (!seen.insert(s).second)
      throw make_error("MalformedDocument", std::string("duplicate label ") +
                                                s + " in the " + which +
                                                " graph");
}

// Union of two graphs identified along equal labels.  The result is reloaded
// through the document path, so it comes back in canonical topological
// numbering (and a directed cycle created by the union is rejected there).
inline Dag union_by_label(const Dag& g1, const Dag& g2) {
  nlohmann::json doc;
  auto verts = nlohmann::json::array();
  std::set<std::string> seen;
  for (const auto& s : g1.labels()) {
    verts.push_back(s);
    seen.insert(s);
  }
  for (const auto& s : g2.labels())
    if (!seen.count(s)) verts.push_back(s);
  std::set<std::pair<std::string, std::string>> es;
  for (auto [i, j] : g1.edges()) es.insert({g1.label(i), g1.label(j)});
  for (auto [i, j] : g2.edges()) es.insert({g2.label(i), g2.label(j)});
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : es)
    edges.push_back(nlohmann::json::array({a, b}));
  doc["vertices"] = verts;
  doc["edges"] = edges;
  return load_dag(doc);
}

inline std::set<int> glued_indices(const Dag& glued, const Dag& side) {
  std::set<int> out;
  for (const auto& s : side.labels()) out.insert(glued.vertex_by_label(s));
  return out;
}

// Equality as labeled graphs, independent of the internal numbering.
inline bool same_labeled(const Dag& a, const Dag& b) {
  std::set<std::string> la(a.labels().begin(), a.labels().end());
  std::set<std::string> lb(b.labels().begin(), b.labels().end());
  if (la != lb) return false;
  std::set<std::pair<std::string, std::string>> ea, eb;
  for (auto [i, j] : a.edges()) ea.insert({a.label(i), a.label(j)});
  for (auto [i, j] : b.edges()) eb.insert({b.label(i), b.label(j)});
  return ea == eb;
}

}  // namespace detail

// Validate a gluing specification and resolve it against the glued graph.
inline GlueContext glue_context(const GluingSpec& spec) {
  detail::check_unique_labels(spec.g1, "first");
  detail::check_unique_labels(spec.g2, "second");

  std::set<std::string> l1(spec.g1.labels().begin(), spec.g1.labels().end());
  std::set<std::string> l2(spec.g2.labels().begin(), spec.g2.labels().end());
  std::set<std::string> common;
  std::set_intersection(l1.begin(), l1.end(), l2.begin(), l2.end(),
                        std::inserter(common, common.end()));
  std::set<std::string> C(spec.shared.begin(), spec.shared.end());
  if (C.size() != spec.shared.size())
    throw make_error("MalformedDocument", "repeated label in the shared set");
  if (C != common) {
    std::string what = "the shared set must list exactly the labels common "
                       "to both graphs";
    for (const auto& s : C)
      if (!common.count(s)) what += "; " + s + " is not common";
    for (const auto& s : common)
      if (!C.count(s)) what += "; common label " + s + " is not listed";
    throw make_error("SharedSubgraphMismatch", what);
  }
  if (!C.count(spec.choke))
    throw make_error("VertexOutOfRange",
                     "choke vertex " + spec.choke + " is not in the shared set");

  // The shared set must induce the same complete DAG on both sides.
  for (const auto& s : C)
    for (const auto& t : C) {
      if (s >= t) continue;
      int a1 = spec.g1.vertex_by_label(s), b1 = spec.g1.vertex_by_label(t);
      int a2 = spec.g2.vertex_by_label(s), b2 = spec.g2.vertex_by_label(t);
      if (!spec.g1.adjacent(a1, b1))
        throw make_error("NotAClique", "shared vertices " + s + " and " + t +
                                           " are not adjacent in the first "
                                           "graph");
      if (!spec.g2.adjacent(a2, b2))
        throw make_error("NotAClique", "shared vertices " + s + " and " + t +
                                           " are not adjacent in the second "
                                           "graph");
      bool fwd1 = spec.g1.has_edge(std::min(a1, b1), std::max(a1, b1)) &&
                  spec.g1.label(std::min(a1, b1)) == s;
      bool fwd2 = spec.g2.has_edge(std::min(a2, b2), std::max(a2, b2)) &&
                  spec.g2.label(std::min(a2, b2)) == s;
      if (fwd1 != fwd2)
        throw make_error("SharedSubgraphMismatch",
                         "the edge between " + s + " and " + t +
                             " points in different directions on the two "
                             "sides");
    }

  GlueContext ctx;
  ctx.glued = detail::union_by_label(spec.g1, spec.g2);
  ctx.v1 = detail::glued_indices(ctx.glued, spec.g1);
  ctx.v2 = detail::glued_indices(ctx.glued, spec.g2);
  for (const auto& s : C) ctx.shared.insert(ctx.glued.vertex_by_label(s));
  ctx.c = ctx.glued.vertex_by_label(spec.choke);

  for (int i : ctx.v1) {
    if (ctx.shared.count(i)) continue;
    for (int j : ctx.v2) {
      if (ctx.shared.count(j)) continue;
      if (trek_connected(ctx.glued, i, j)) {
        ctx.cross_treks = true;
        break;
      }
    }
    if (ctx.cross_treks) break;
  }
  // With no trek joining the far sides every covariance between them is
  // zero, and the gluing is accepted with no further condition.
  if (!ctx.cross_treks) return ctx;

  std::set<int> D = ctx.shared;
  D.erase(ctx.c);
  std::set<int> I = ctx.v1, J = ctx.v2;
  for (int d : D) {
    I.erase(d);
    J.erase(d);
  }
  bool c_always_left = true, c_always_right = true;
  std::optional<Trek> left_witness, right_witness;
  for (int i : I)
    for (int j : J) {
      if (i == j && i != ctx.c) continue;  // only c is common to I and J
      for (const Trek& t : treks(ctx.glued, i, j)) {
        auto verts = t.vertices();
        if (!verts.count(ctx.c))
          throw make_error("ChokePointViolated",
                           "a trek joining the two sides avoids the choke "
                           "vertex: " +
                               trek_text(ctx.glued, t));
        for (int d : D)
          if (verts.count(d))
            throw make_error("DVertexOnTrek",
                             "a trek joining the two sides passes through "
                             "the shared vertex " +
                                 ctx.glued.label(d) + ": " +
                                 trek_text(ctx.glued, t));
        if (t.top != ctx.c) {
          bool on_left = std::count(t.left.begin(), t.left.end(), ctx.c) > 0;
          if (on_left) {
            c_always_right = false;
            if (!left_witness) left_witness = t;
          } else {
            c_always_left = false;
            if (!right_witness) right_witness = t;
          }
        }
      }
    }
  if (!c_always_left && !c_always_right)
    throw make_error("ChokePointViolated",
                     "the choke vertex sits on the first-graph side of " +
                         trek_text(ctx.glued, *left_witness) +
                         " but on the second-graph side of " +
                         trek_text(ctx.glued, *right_witness));
  return ctx;
}

inline Dag safe_glue(const GluingSpec& spec) { return glue_context(spec).glued; }

// ---------------------------------------------------------------------------
// Decomposition search: ways of writing a graph as a gluing of two induced
// subgraphs along a clique with a choke vertex.
// ---------------------------------------------------------------------------
namespace detail {

// Connected components of the undirected skeleton after removing `cut`,
// listed in increasing order of their smallest vertex.
inline std::vector<std::set<int>> skeleton_components_excluding(
    const Dag& g, const std::set<int>& cut) {
  std::vector<std::set<int>> comps;
  std::set<int> seen(cut.begin(), cut.end());
  for (int v = 1; v <= g.n(); ++v) {
    if (seen.count(v)) continue;
    std::set<int> comp;
    std::vector<int> todo{v};
    seen.insert(v);
    while (!todo.empty()) {
      int u = todo.back();
      todo.pop_back();
      comp.insert(u);
      for (int w : g.parents(u))
        if (seen.insert(w).second) todo.push_back(w);
      for (int w : g.children(u))
        if (seen.insert(w).second) todo.push_back(w);
    }
    comps.push_back(comp);
  }
  return comps;
}

}  // namespace detail

// All ways of splitting g into two induced sides glued along the clique C
// with choke vertex c.  Removing C must disconnect the skeleton; every
// bipartition of the resulting components is tried, and only splits that
// pass the full gluing validation are kept.
inline std::vector<GluingSpec> decompositions_at(const Dag& g,
                                                 const std::set<int>& C,
                                                 int c) {
  std::vector<GluingSpec> out;
  if (!C.count(c) || !g.is_clique(C)) return out;
  auto comps = detail::skeleton_components_excluding(g, C);
  int k = static_cast<int>(comps.size());
  if (k < 2) return out;
  std::vector<std::string> shared_labels;
  for (int v : C) shared_labels.push_back(g.label(v));
  // The component holding the smallest vertex stays on the first side, which
  // rules out mirror-image repeats.
  for (unsigned mask = 1; mask + 1 < (1u << k); mask += 2) {
    std::set<int> s1(C.begin(), C.end()), s2(C.begin(), C.end());
    for (int b = 0; b < k; ++b) {
      auto& side = (mask >> b & 1u) ? s1 : s2;
      side.insert(comps[b].begin(), comps[b].end());
    }
    GluingSpec spec{g.induced(s1), g.induced(s2), shared_labels, g.label(c)};
    try {
      GlueContext ctx = glue_context(spec);
      if (detail::same_labeled(ctx.glued, g)) out.push_back(std::move(spec));
    } catch (const Error&) {
      // this split is not a valid gluing; keep looking
    }
  }
  return out;
}

inline std::vector<GluingSpec> find_safe_gluing_decomposition(const Dag& g) {
  if (g.n() > 10)
    throw make_error("ScopeTooLarge",
                     "decomposition search is limited to 10 vertices");
  std::vector<std::set<int>> cliques;
  for (unsigned mask = 1; mask < (1u << g.n()); ++mask) {
    std::set<int> C;
    for (int b = 0; b < g.n(); ++b)
      if (mask >> b & 1u) C.insert(b + 1);
    if (g.is_clique(C)) cliques.push_back(std::move(C));
  }
  std::sort(cliques.begin(), cliques.end(),
            [](const std::set<int>& a, const std::set<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  std::vector<GluingSpec> out;
  for (const auto& C : cliques)
    for (int c : C) {
      auto found = decompositions_at(g, C, c);
      out.insert(out.end(), std::make_move_iterator(found.begin()),
                 std::make_move_iterator(found.end()));
    }
  return out;
}

// A gluing is minimal when no proper subset D' of D = C \ {c} also splits
// the same glued graph along {c} ∪ D'.
inline bool is_minimal_safe_gluing(const GluingSpec& spec) {
  GlueContext ctx = glue_context(spec);
  std::vector<int> D;
  for (int v : ctx.shared)
    if (v != ctx.c) D.push_back(v);
  int k = static_cast<int>(D.size());
  for (unsigned mask = 0; mask + 1 < (1u << k); ++mask) {
    std::set<int> Cp{ctx.c};
    for (int b = 0; b < k; ++b)
      if (mask >> b & 1u) Cp.insert(D[b]);
    if (!decompositions_at(ctx.glued, Cp, ctx.c).empty()) return false;
  }
  return true;
}

// Structural facts that hold for every accepted gluing: the tops of all
// treks joining the far sides sit within one side, and a minimal gluing has
// the edge c -> d for every d in D.  The report lists any violation.
struct LemmaReport {
  bool pass = true;
  bool minimal = false;
  std::string top_side;  // "G1", "G2", "either", or "none" (no cross treks)
  std::vector<std::string> witnesses;
};

inline LemmaReport check_minimal_gluing_lemma(const GluingSpec& spec) {
  GlueContext ctx = glue_context(spec);
  LemmaReport rep;
  bool any = false, all1 = true, all2 = true;
  for (int i : ctx.v1) {
    if (ctx.shared.count(i)) continue;
    for (int j : ctx.v2) {
      if (ctx.shared.count(j)) continue;
      for (const Trek& t : treks(ctx.glued, i, j)) {
        any = true;
        bool in1 = ctx.v1.count(t.top) > 0, in2 = ctx.v2.count(t.top) > 0;
        if (!in1) all1 = false;
        if (!in2) all2 = false;
        if (!all1 && !all2) {
          rep.pass = false;
          rep.witnesses.push_back(
              "trek tops fall on both sides; offending trek: " +
              trek_text(ctx.glued, t));
        }
      }
    }
  }
  rep.top_side = !any          ? "none"
                 : all1 && all2 ? "either"
                 : all1         ? "G1"
                 : all2         ? "G2"
                                : "neither";
  rep.minimal = is_minimal_safe_gluing(spec);
  if (rep.minimal) {
    for (int d : ctx.shared) {
      if (d == ctx.c) continue;
      const auto& ch = ctx.glued.children(ctx.c);
      if (!std::binary_search(ch.begin(), ch.end(), d)) {
        rep.pass = false;
        rep.witnesses.push_back("minimal gluing lacks the edge " +
                                ctx.glued.label(ctx.c) + " -> " +
                                ctx.glued.label(d));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gluing at sinks and universal sink extension.
// ---------------------------------------------------------------------------

// Union of two graphs whose common labels are sinks in both.  Every trek
// between two shared sinks automatically stays within one side (a shared
// sink in the interior would be a collider); the extra requirement is that
// for each shared pair all treks come from the SAME side.
inline Dag glue_at_sinks(const Dag& g1, const Dag& g2) {
  detail::check_unique_labels(g1, "first");
  detail::check_unique_labels(g2, "second");
  std::set<std::string> l1(g1.labels().begin(), g1.labels().end());
  std::vector<std::string> shared;
  for (const auto& s : g2.labels())
    if (l1.count(s)) shared.push_back(s);
  for (const auto& s : shared) {
    if (!g1.children(g1.vertex_by_label(s)).empty())
      throw make_error("SharedVertexNotSink",
                       "shared vertex " + s + " has children in the first "
                                              "graph");
    if (!g2.children(g2.vertex_by_label(s)).empty())
      throw make_error("SharedVertexNotSink",
                       "shared vertex " + s + " has children in the second "
                                              "graph");
  }
  Dag glued = detail::union_by_label(g1, g2);
  std::set<int> S, V1, V2;
  for (const auto& s : shared) S.insert(glued.vertex_by_label(s));
  V1 = detail::glued_indices(glued, g1);
  V2 = detail::glued_indices(glued, g2);
  for (int s : S)
    for (int t : S) {
      if (s >= t) continue;
      bool side1 = false, side2 = false;
      for (const Trek& tk : treks(glued, s, t))
        for (int v : tk.vertices()) {
          if (S.count(v)) continue;
          if (V1.count(v)) side1 = true;
          if (V2.count(v)) side2 = true;
        }
      if (side1 && side2)
        throw make_error("TrekSideConditionViolated",
                         "shared sinks " + glued.label(s) + " and " +
                             glued.label(t) +
                             " are joined by treks from both sides");
    }
  return glued;
}

// Extend a graph with one fresh vertex receiving an edge from every
// existing vertex.  The label defaults to the least unused decimal.
inline Dag add_sink(const Dag& g, const std::string& label = std::string()) {
  std::set<std::string> used(g.labels().begin(), g.labels().end());
  std::string lab = label;
  if (lab.empty()) {
    for (int k = g.n() + 1;; ++k) {
      lab = std::to_string(k);
      if (!used.count(lab)) break;
    }
  } else if (used.count(lab)) {
    throw make_error("DuplicateVertex",
                     "label " + lab + " is already in use");
  }
  nlohmann::json doc;
  auto verts = nlohmann::json::array();
  for (const auto& s : g.labels()) verts.push_back(s);
  verts.push_back(lab);
  auto edges = nlohmann::json::array();
  for (auto [i, j] : g.edges())
    edges.push_back(nlohmann::json::array({g.label(i), g.label(j)}));
  for (int v = 1; v <= g.n(); ++v)
    edges.push_back(nlohmann::json::array({g.label(v), lab}));
  doc["vertices"] = verts;
  doc["edges"] = edges;
  return load_dag(doc);
}

// ---------------------------------------------------------------------------
// Transporting covariance polynomials between graphs that share labels.
// ---------------------------------------------------------------------------
namespace detail {

// Rewrite a polynomial over src's covariance ring in dst's covariance ring,
// matching vertices by label.
inline Poly transport_sigma_poly(const Poly& f, const Dag& src,
                                 const Dag& dst, const RingPtr& dst_ring) {
  int n = src.n();
  size_t cols = static_cast<size_t>(n) * (n + 1) / 2;
  std::vector<bool> used(cols, false);
  for (const auto& [m, c] : f.terms())
    for (size_t v = 0; v < m.size() && v < cols; ++v)
      if (m[v] > 0) used[v] = true;
  // resolve only the variables that occur: src may have vertices with no
  // counterpart in dst, which is fine as long as f never mentions them
  std::deque<Poly> store;
  std::vector<const Poly*> images(cols, nullptr);
  size_t k = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j, ++k) {
      if (!used[k]) continue;
      int a = dst.vertex_by_label(src.label(i));
      int b = dst.vertex_by_label(src.label(j));
      store.push_back(Poly::variable(
          dst_ring, sigma_name(std::min(a, b), std::max(a, b))));
      images[k] = &store.back();
    }
  return f.substitute(dst_ring, images);
}

inline void check_sigma_ring(const IdealPresentation& pres, const Dag& g,
                             const char* which) {
  int expect = g.n() * (g.n() + 1) / 2;
  if (pres.ring->size() != expect)
    throw make_error("MalformedDocument",
                     std::string("the ") + which +
                         " ideal is not presented over the covariance ring "
                         "of its graph");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Composition recipes: generators of the glued graph's vanishing ideal
// assembled from the two sides without a fresh elimination.
// ---------------------------------------------------------------------------

// Sinks gluing: the side ideals are carried over verbatim except that
// single-indeterminate generators on shared sink pairs are re-derived from
// the glued graph; every covariance between the two far sides vanishes; and
// a shared sink pair with no trek at all contributes its own indeterminate.
inline IdealPresentation composed_ideal_sinks(const Dag& g1, const Dag& g2,
                                              const IdealPresentation& I1,
                                              const IdealPresentation& I2) {
  detail::check_sigma_ring(I1, g1, "first");
  detail::check_sigma_ring(I2, g2, "second");
  Dag glued = glue_at_sinks(g1, g2);
  int n = glued.n();
  RingPtr sr = sigma_ring(n);
  std::set<int> S, V1, V2;
  std::set<std::string> l1(g1.labels().begin(), g1.labels().end());
  for (const auto& s : g2.labels())
    if (l1.count(s)) S.insert(glued.vertex_by_label(s));
  V1 = detail::glued_indices(glued, g1);
  V2 = detail::glued_indices(glued, g2);

  auto sigma_pair_of = [&](const Poly& f) -> std::optional<Edge> {
    // recognize a generator that is a single covariance indeterminate
    if (f.term_count() != 1) return std::nullopt;
    const auto& [m, c] = *f.terms().begin();
    if (total_degree(m) != 1) return std::nullopt;
    int col = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j, ++col)
        if (m[col] == 1) return Edge{i, j};
    return std::nullopt;
  };

  std::vector<Poly> gens;
  auto add_side = [&](const Dag& gi, const IdealPresentation& Ii) {
    for (const Poly& f : Ii.gens) {
      Poly t = detail::transport_sigma_poly(f, gi, glued, sr);
      if (auto pr = sigma_pair_of(t))
        if (S.count(pr->first) && S.count(pr->second)) continue;
      gens.push_back(std::move(t));
    }
  };
  add_side(g1, I1);
  add_side(g2, I2);
  for (int i : V1) {
    if (S.count(i)) continue;
    for (int j : V2) {
      if (S.count(j)) continue;
      gens.push_back(Poly::variable(
          sr, sigma_name(std::min(i, j), std::max(i, j))));
    }
  }
  for (int s : S)
    for (int t : S) {
      if (s >= t) continue;
      if (!trek_connected(glued, s, t))
        gens.push_back(Poly::variable(sr, sigma_name(s, t)));
    }
  normalize_generators(gens, degrevlex(*sr));
  return IdealPresentation{sr, std::move(gens), "composition"};
}

// Universal sink extension: the ideal does not change, only its ambient
// variable set grows.
inline IdealPresentation composed_ideal_add_sink(
    const Dag& g, const IdealPresentation& I,
    const std::string& label = std::string()) {
  detail::check_sigma_ring(I, g, "base");
  Dag gp = add_sink(g, label);
  RingPtr sr = sigma_ring(gp.n());
  std::vector<Poly> gens;
  for (const Poly& f : I.gens)
    gens.push_back(detail::transport_sigma_poly(f, g, gp, sr));
  normalize_generators(gens, degrevlex(*sr));
  return IdealPresentation{sr, std::move(gens), "composition"};
}

// Choke gluing: the side ideals are carried over, and every pair (i, j)
// across the two far sides contributes generators.  A pair with no treks
// contributes the plain indeterminate s_ij.  A trek-connected pair (all of
// its treks pass the choke vertex c) contributes the quadric
// s_ic * s_cj - s_ij * s_cc, which follows from the conditional
// independence of i and j given c, plus the analogous quadric
// s_is * s_tj - s_ij * s_st for every other pair (s, t) of shared clique
// vertices whose covariances factor the same way; those extra quadrics are
// admitted only after verifying membership in the kernel of the glued
// shortest trek map.  Without them the candidate can fall strictly short
// of the shortest trek ideal, which is only its saturation at s_cc.  The
// candidate presentation is then certified against the glued graph: it
// must agree with the shortest trek ideal, whose equality with the
// vanishing ideal is certified as usual (every generator vanishes, plus
// the rank and primality facts).
struct ComposedIdeal {
  IdealPresentation ideal;
  Certificate certificate;
};

inline ComposedIdeal composed_ideal_safe_glue(const GluingSpec& spec,
                                              const IdealPresentation& I1,
                                              const IdealPresentation& I2,
                                              Budget& budget) {
  detail::check_sigma_ring(I1, spec.g1, "first");
  detail::check_sigma_ring(I2, spec.g2, "second");
  GlueContext ctx = glue_context(spec);
  const Dag& G = ctx.glued;
  RingPtr sr = sigma_ring(G.n());

  std::vector<Poly> gens;
  std::set<int> used1, used2;  // ring variables appearing on each side
  auto add_side = [&](const Dag& gi, const IdealPresentation& Ii,
                      std::set<int>& used) {
    for (const Poly& f : Ii.gens) {
      Poly t = detail::transport_sigma_poly(f, gi, G, sr);
      for (const auto& [m, c] : t.terms())
        for (size_t v = 0; v < m.size(); ++v)
          if (m[v] > 0) used.insert(static_cast<int>(v));
      gens.push_back(std::move(t));
    }
  };
  add_side(spec.g1, I1, used1);
  add_side(spec.g2, I2, used2);

  // Shortest-trek images over the glued graph, when defined: they justify
  // the clique pair quadrics beyond the choke one.
  std::optional<TrekMap> stm;
  if (auto r = shortest_trek_map(G); std::holds_alternative<TrekMap>(r))
    stm = std::get<TrekMap>(std::move(r));
  auto var_of = [&](int x, int y) {
    return Poly::variable(sr, sigma_name(std::min(x, y), std::max(x, y)));
  };
  auto image_of = [&](int x, int y) -> const Poly& {
    return stm->image[sigma_index(G.n(), std::min(x, y), std::max(x, y))];
  };
  bool extra_quadrics = false;
  for (int i : ctx.v1) {
    if (ctx.shared.count(i)) continue;
    for (int j : ctx.v2) {
      if (ctx.shared.count(j)) continue;
      if (trek_connected(G, i, j)) {
        // every trek between i and j passes the choke vertex, so the
        // conditional independence of i and j given c puts this minor in
        // the vanishing ideal
        gens.push_back(var_of(i, ctx.c) * var_of(ctx.c, j) -
                       var_of(i, j) * var_of(ctx.c, ctx.c));
        // the remaining clique pairs contribute a quadric exactly when it
        // lies in the kernel of the glued shortest trek map
        if (!stm) continue;
        for (int s : ctx.shared)
          for (int t : ctx.shared) {
            if (s == ctx.c && t == ctx.c) continue;
            if (image_of(i, s) * image_of(t, j) !=
                image_of(i, j) * image_of(s, t))
              continue;
            gens.push_back(var_of(i, s) * var_of(t, j) -
                           var_of(i, j) * var_of(s, t));
            extra_quadrics = true;
          }
      } else {
        gens.push_back(var_of(i, j));
      }
    }
  }
  normalize_generators(gens, degrevlex(*sr));
  IdealPresentation pres{sr, std::move(gens), "composition"};

  Certificate cert;
  cert.claim =
      "the composed generators present the vanishing ideal of the glued "
      "graph, which coincides with its shortest trek ideal";
  std::set<int> overlap;
  std::set_intersection(used1.begin(), used1.end(), used2.begin(),
                        used2.end(), std::inserter(overlap, overlap.end()));
  int cc = sigma_index(G.n(), ctx.c, ctx.c);
  bool only_cc = true;
  for (int v : overlap)
    if (v != cc) only_cc = false;
  if (only_cc)
    cert.assumptions.push_back(
        "the side ideals share at most the choke variance indeterminate " +
        sigma_name(ctx.c, ctx.c));
  if (extra_quadrics)
    cert.evidence.push_back(
        "clique pair quadrics beyond the choke one were kept only after "
        "verifying membership in the kernel of the glued shortest trek map");

  Certificate base = certify_I_equals_ST(G, budget);
  for (const auto& e : base.evidence) cert.evidence.push_back(e);
  for (const auto& a : base.assumptions) cert.assumptions.push_back(a);
  if (base.result != "IequalsST") {
    cert.result = "NotEqual";
    return ComposedIdeal{std::move(pres), std::move(cert)};
  }
  IdealPresentation st = st_ideal(G, budget);
  if (!ideal_equal(pres.gens, st.gens, sr, budget)) {
    cert.result = "NotEqual";
    cert.evidence.push_back(
        "the composed generators and the shortest trek ideal of the glued "
        "graph present different ideals");
    return ComposedIdeal{std::move(pres), std::move(cert)};
  }
  cert.result = "Toric";
  cert.evidence.push_back(
      "the composed generators agree with the shortest trek ideal of the "
      "glued graph (Groebner comparison)");
  return ComposedIdeal{std::move(pres), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Projection and lifting of covariance monomials across a gluing.
// ---------------------------------------------------------------------------

// Project a covariance monomial of the glued graph onto one side: a factor
// with both endpoints strictly on the far side is dropped, and a far
// endpoint of a mixed factor is replaced by the choke vertex.
inline Mono rho_project(const GlueContext& ctx, GlueSide side, const Mono& m) {
  int n = ctx.glued.n();
  if (static_cast<int>(m.size()) != n * (n + 1) / 2)
    throw make_error("MalformedDocument",
                     "monomial is not over the glued covariance ring");
  const std::set<int>& near = side == GlueSide::G1 ? ctx.v1 : ctx.v2;
  Mono out(m.size(), 0);
  int col = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j, ++col) {
      if (m[col] == 0) continue;
      bool i_far = !near.count(i), j_far = !near.count(j);
      if (i_far && j_far) continue;
      int a = i_far ? ctx.c : i, b = j_far ? ctx.c : j;
      out[sigma_index(n, std::min(a, b), std::max(a, b))] += m[col];
    }
  return out;
}

namespace detail {

// Decode a normalized binomial over a covariance ring into its two degree-2
// monomials, each given as an unordered pair of index pairs.
struct QuadBinomial {
  std::array<Edge, 2> plus, minus;
};

inline std::optional<QuadBinomial> quad_binomial(const Poly& f, int n) {
  if (f.term_count() != 2) return std::nullopt;
  std::optional<std::array<Edge, 2>> plus, minus;
  for (const auto& [m, c] : f.terms()) {
    if (total_degree(m) != 2) return std::nullopt;
    std::array<Edge, 2> arr;
    int got = 0;
    int col = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j, ++col)
        for (int e = 0; e < m[col]; ++e) {
          if (got == 2) return std::nullopt;
          arr[got++] = Edge{i, j};
        }
    if (got != 2) return std::nullopt;
    if (c == 1 && !plus)
      plus = arr;
    else if (c == -1 && !minus)
      minus = arr;
    else
      return std::nullopt;
  }
  if (!plus || !minus) return std::nullopt;
  return QuadBinomial{*plus, *minus};
}

// Whether the binomial with the given monomials is a conditional
// independence minor: rows {a, d} and columns {b, e} of the covariance
// matrix with some single conditioning vertex separating them.
inline bool minor_in_ci(const Dag& g, int a, int b, int d, int e) {
  for (int c = 1; c <= g.n(); ++c) {
    std::set<int> A{a, d}, B{b, e};
    std::set<int> common;
    for (int v : A)
      if (B.count(v)) common.insert(v);
    bool ok = true;
    for (int v : common)
      if (v != c) ok = false;
    if (!ok) continue;
    A.erase(c);
    B.erase(c);
    if (A.empty() || B.empty()) continue;
    if (d_separated(g, A, B, {c})) return true;
  }
  return false;
}

inline std::optional<Trek> unique_shortest(const Dag& g, int i, int j) {
  auto st = shortest_trek(g, i, j);
  if (std::holds_alternative<Trek>(st)) return std::get<Trek>(st);
  return std::nullopt;
}

// The shortest trek between i and c, extended through c: the unique
// shortest trek between i and t must contain every vertex of the unique
// shortest trek between i and c.
inline bool shortest_extends(const Dag& g, int i, int c, int t,
                             std::string& why) {
  auto base = unique_shortest(g, i, c);
  if (!base) {
    why = "no unique shortest trek between " + g.label(i) + " and " +
          g.label(c);
    return false;
  }
  auto ext = unique_shortest(g, i, t);
  if (!ext) {
    why = "no unique shortest trek between " + g.label(i) + " and " +
          g.label(t);
    return false;
  }
  auto bv = base->vertices(), ev = ext->vertices();
  if (!ev.count(c)) {
    why = "the shortest trek between " + g.label(i) + " and " + g.label(t) +
          " misses the choke vertex";
    return false;
  }
  for (int v : bv)
    if (!ev.count(v)) {
      why = "the shortest trek between " + g.label(i) + " and " +
            g.label(t) + " does not extend the one between " + g.label(i) +
            " and " + g.label(c);
      return false;
    }
  return true;
}

}  // namespace detail

// Lift a 2x2-minor binomial of the first side's conditional independence
// ideal into the glued graph.  Writing f = s_ij * s_kl - s_il * s_kj, the
// choke vertex may appear in none of the four slots (the binomial lifts to
// itself), in slot j or slot l (one far-side target vertex replaces it), or
// in slots j and k at once (two target vertices replace the two choke
// occurrences and s_cc becomes s_pq).  Each candidate is validated in the
// glued graph: the lift must again be a conditional independence minor and
// its two monomials must have equal images under the shortest trek map.
inline std::vector<Poly> lift_binomial(const GluingSpec& spec, const Poly& f,
                                       const std::vector<std::string>& targets) {
  GlueContext ctx = glue_context(spec);
  const Dag& G = ctx.glued;
  int n = G.n();
  RingPtr sr = sigma_ring(n);
  Poly fg = detail::transport_sigma_poly(f, spec.g1, G, sr);
  MonoOrder ord = degrevlex(*sr);
  fg.normalize(ord);
  auto qb = detail::quad_binomial(fg, n);
  if (!qb)
    throw make_error("MalformedDocument",
                     "expected a quadratic binomial with unit coefficients");

  std::set<int> allowed;  // target pool: the second side minus D
  for (int v : ctx.v2)
    if (!ctx.shared.count(v) || v == ctx.c) allowed.insert(v);
  std::vector<int> tv;
  for (const auto& s : targets) {
    int v = G.vertex_by_label(s);
    if (!allowed.count(v))
      throw make_error("VertexOutOfRange",
                       "target " + s + " is not on the second side minus "
                                       "the non-choke shared vertices");
    tv.push_back(v);
  }

  ExponentMatrix em = exponent_matrix(G);
  auto in_kernel = [&](int a, int b, int d, int e, int a2, int b2, int d2,
                       int e2) {
    // column index of a pair, or -1 when its covariance vanishes
    auto col = [&](int p, int q) {
      Edge key{std::min(p, q), std::max(p, q)};
      for (size_t k = 0; k < em.columns.size(); ++k)
        if (em.columns[k] == key) return static_cast<int>(k);
      return -1;
    };
    int c1 = col(a, b), c2 = col(d, e), c3 = col(a2, b2), c4 = col(d2, e2);
    if (c1 < 0 || c2 < 0 || c3 < 0 || c4 < 0) return false;
    std::vector<int> u(em.columns.size(), 0), v(em.columns.size(), 0);
    u[c1] += 1;
    u[c2] += 1;
    v[c3] += 1;
    v[c4] += 1;
    return em.M.apply_int(u) == em.M.apply_int(v);
  };

  auto make_lift = [&](int i, int j, int k, int l) {
    return Poly::variable(sr, sigma_name(std::min(i, j), std::max(i, j))) *
               Poly::variable(sr,
                              sigma_name(std::min(k, l), std::max(k, l))) -
           Poly::variable(sr, sigma_name(std::min(i, l), std::max(i, l))) *
               Poly::variable(sr, sigma_name(std::min(k, j), std::max(k, j)));
  };

  std::vector<Poly> out;
  std::optional<Error> failure;
  auto validate_and_emit = [&](int i, int j, int k, int l, const char* which) {
    if (!detail::minor_in_ci(G, i, j, k, l)) {
      if (!failure)
        failure = make_error(
            "ConditionViolated",
            std::string(which) +
                ": the lifted minor is not a conditional independence "
                "statement of the glued graph");
      return;
    }
    if (!in_kernel(i, j, k, l, i, l, k, j)) {
      if (!failure)
        failure = make_error(
            "ConditionViolated",
            std::string(which) +
                ": the lifted binomial is not in the kernel of the "
                "shortest trek map");
      return;
    }
    Poly lift = make_lift(i, j, k, l);
    lift.normalize(ord);
    if (lift.is_zero()) return;
    for (const Poly& p : out)
      if (p == lift) return;
    out.push_back(std::move(lift));
  };

  // All ways of reading the binomial as s_ij s_kl - s_il s_kj.
  std::vector<std::array<int, 4>> shapes;
  auto [p1, p2] = std::pair{qb->plus[0], qb->plus[1]};
  for (int swap_factors = 0; swap_factors < 2; ++swap_factors) {
    Edge f1 = swap_factors ? p2 : p1, f2 = swap_factors ? p1 : p2;
    for (int o1 = 0; o1 < 2; ++o1)
      for (int o2 = 0; o2 < 2; ++o2) {
        int i = o1 ? f1.second : f1.first, j = o1 ? f1.first : f1.second;
        int k = o2 ? f2.second : f2.first, l = o2 ? f2.first : f2.second;
        auto key = [](int a, int b) {
          return Edge{std::min(a, b), std::max(a, b)};
        };
        std::array<Edge, 2> want{key(i, l), key(k, j)};
        std::array<Edge, 2> have{qb->minus[0], qb->minus[1]};
        std::sort(want.begin(), want.end());
        std::sort(have.begin(), have.end());
        if (want != have) continue;
        std::array<int, 4> sh{i, j, k, l};
        if (std::find(shapes.begin(), shapes.end(), sh) == shapes.end())
          shapes.push_back(sh);
      }
  }
  if (shapes.empty())
    throw make_error("MalformedDocument",
                     "the binomial does not have the 2x2 minor shape");

  for (auto [i, j, k, l] : shapes) {
    int c = ctx.c;
    int c_count = (i == c) + (j == c) + (k == c) + (l == c);
    if (c_count == 0) {
      validate_and_emit(i, j, k, l, "identity lift");
    } else if (j == c && k == c && i != c && l != c) {
      for (int p : tv)
        for (int q : tv) {
          std::string why;
          if (!detail::shortest_extends(G, i, c, p, why)) {
            if (!failure)
              failure = make_error("ConditionViolated",
                                   "double choke slot: " + why);
            continue;
          }
          if (!detail::shortest_extends(G, l, c, q, why)) {
            if (!failure)
              failure = make_error("ConditionViolated",
                                   "double choke slot: " + why);
            continue;
          }
          auto mid = detail::unique_shortest(G, p, q);
          if (!mid || !mid->vertices().count(c)) {
            if (!failure)
              failure = make_error(
                  "ConditionViolated",
                  "double choke slot: the shortest trek between " +
                      G.label(p) + " and " + G.label(q) +
                      " must be unique and pass the choke vertex");
            continue;
          }
          validate_and_emit(i, p, q, l, "double choke slot");
        }
    } else if (j == c && c_count == 1) {
      for (int t : tv) {
        std::string why;
        if (!detail::shortest_extends(G, i, c, t, why)) {
          if (!failure)
            failure =
                make_error("ConditionViolated", "choke in slot j: " + why);
          continue;
        }
        validate_and_emit(i, t, k, l, "choke in slot j");
      }
    } else if (l == c && c_count == 1) {
      for (int t : tv) {
        std::string why;
        if (!detail::shortest_extends(G, k, c, t, why)) {
          if (!failure)
            failure =
                make_error("ConditionViolated", "choke in slot l: " + why);
          continue;
        }
        validate_and_emit(i, j, k, t, "choke in slot l");
      }
    }
  }
  if (out.empty() && failure) throw *failure;
  if (out.empty())
    throw make_error("ConditionViolated",
                     "no lift case applies to this binomial with the given "
                     "targets");
  return out;
}

}  // namespace trektoric

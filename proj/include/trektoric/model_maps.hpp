#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "trektoric/dag.hpp"
#include "trektoric/groebner.hpp"
#include "trektoric/intlinalg.hpp"
#include "trektoric/poly.hpp"
#include "trektoric/trek.hpp"

namespace trektoric {

// Ring of covariance indeterminates s{i}_{j} for 1 <= i <= j <= n,
// listed in (i, j) order.
inline RingPtr sigma_ring(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) names.push_back(sigma_name(i, j));
  return make_ring(names);
}

inline int sigma_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // Position of (i, j) among (1,1), (1,2), ..., (n,n).
  return (i - 1) * n - (i - 1) * (i - 2) / 2 + (j - i);
}

// Ring of model parameters: a variance symbol per vertex, then an edge
// loading per edge, in edge order.
inline RingPtr param_ring(const Dag& g) {
  std::vector<std::string> names;
  for (int v = 1; v <= g.n(); ++v) names.push_back(a_name(v));
  for (auto [i, j] : g.edges()) names.push_back(lambda_name(i, j));
  return make_ring(names);
}

// Ring with one degree symbol per vertex, target of the endpoint map.
inline RingPtr endpoint_ring(int n) {
  std::vector<std::string> names;
  for (int v = 1; v <= n; ++v) names.push_back(d_name(v));
  return make_ring(names);
}

struct TrekMap {
  RingPtr sigma;   // domain variables
  RingPtr target;  // image ring
  std::vector<Poly> image;  // image[k] for sigma variable k
};

// The simple trek rule: each covariance indeterminate maps to the sum over
// all treks between its endpoints of (top variance symbol) * (product of
// edge loadings along both sides).  The diagonal maps to its own variance
// symbol, since the trivial trek is the only trek from a vertex to itself.
inline TrekMap simple_trek_rule(const Dag& g) {
  TrekMap tm;
  tm.sigma = sigma_ring(g.n());
  tm.target = param_ring(g);
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i; j <= g.n(); ++j) {
      Poly img(tm.target);
      for (const Trek& t : treks(g, i, j)) {
        Mono m(tm.target->size(), 0);
        m[tm.target->var(a_name(t.top))] = 1;
        for (Edge e : t.used_edges())
          m[tm.target->var(lambda_name(e.first, e.second))] += 1;
        img.add_term(m, 1);
      }
      tm.image.push_back(img);
    }
  return tm;
}

struct ShortestTrekUndefined {
  int i = 0, j = 0;
  Trek first, second;  // two tied shortest treks as the witness
};

// The shortest trek map: defined only when every trek-connected pair has a
// unique shortest trek; images are monomials (or zero for pairs with no
// trek at all).
inline std::variant<TrekMap, ShortestTrekUndefined> shortest_trek_map(
    const Dag& g) {
  TrekMap tm;
  tm.sigma = sigma_ring(g.n());
  tm.target = param_ring(g);
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i; j <= g.n(); ++j) {
      auto st = shortest_trek(g, i, j);
      if (std::holds_alternative<AmbiguousShortestTrek>(st)) {
        auto w = std::get<AmbiguousShortestTrek>(st);
        return ShortestTrekUndefined{i, j, w.first, w.second};
      }
      Poly img(tm.target);
      if (std::holds_alternative<Trek>(st)) {
        const Trek& t = std::get<Trek>(st);
        Mono m(tm.target->size(), 0);
        m[tm.target->var(a_name(t.top))] = 1;
        for (Edge e : t.used_edges())
          m[tm.target->var(lambda_name(e.first, e.second))] += 1;
        img.add_term(m, 1);
      }
      tm.image.push_back(img);
    }
  return tm;
}

// The endpoint map: s_ij -> d_i * d_j for trek-connected pairs, else zero.
inline TrekMap endpoint_map(const Dag& g) {
  TrekMap tm;
  tm.sigma = sigma_ring(g.n());
  tm.target = endpoint_ring(g.n());
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i; j <= g.n(); ++j) {
      Poly img(tm.target);
      if (trek_connected(g, i, j)) {
        Mono m(tm.target->size(), 0);
        m[tm.target->var(d_name(i))] += 1;
        m[tm.target->var(d_name(j))] += 1;
        img.add_term(m, 1);
      }
      tm.image.push_back(img);
    }
  return tm;
}

// Exponent matrix of the shortest trek map: one row per variance symbol
// (vertices 1..n) followed by one row per edge loading (edge order); one
// column per trek-connected pair (i, j), i <= j, in (i, j) order.  Pairs
// with no trek are excluded and reported separately.
struct ExponentMatrix {
  IntMatrix M;
  std::vector<Edge> columns;     // the pair carried by each column
  std::vector<Edge> zero_pairs;  // pairs whose covariance maps to zero
};

inline ExponentMatrix exponent_matrix(const Dag& g) {
  auto stm = shortest_trek_map(g);
  if (std::holds_alternative<ShortestTrekUndefined>(stm)) {
    const auto& w = std::get<ShortestTrekUndefined>(stm);
    throw make_error("ShortestTrekUndefined",
                     "tied shortest treks between " + g.label(w.i) + " and " +
                         g.label(w.j));
  }
  const TrekMap& tm = std::get<TrekMap>(stm);
  ExponentMatrix em;
  int k = 0;
  std::vector<Mono> cols;
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i; j <= g.n(); ++j, ++k) {
      const Poly& img = tm.image[k];
      if (img.is_zero()) {
        em.zero_pairs.push_back({i, j});
        continue;
      }
      em.columns.push_back({i, j});
      cols.push_back(img.terms().begin()->first);
    }
  int rows = g.n() + static_cast<int>(g.edges().size());
  em.M = IntMatrix(rows, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (int r = 0; r < rows; ++r) em.M.at(r, static_cast<int>(c)) = cols[c][r];
  return em;
}

// ---------------------------------------------------------------------------
// Numeric side: exact covariance from parameters, and sampling.
// ---------------------------------------------------------------------------

// Covariance matrix of the linear structural model: error variance per
// vertex, loading per edge.  Sigma_ij is the sum over pairs of directed
// paths from a common source k of omega_k times both path products.
inline std::vector<std::vector<mpq_class>> covariance_from_params(
    const Dag& g, const std::map<int, mpq_class>& variances,
    const std::map<int, std::map<int, mpq_class>>& loadings) {
  int n = g.n();
  auto lam = [&](int i, int j) -> const mpq_class& {
    auto it = loadings.find(i);
    if (it != loadings.end()) {
      auto jt = it->second.find(j);
      if (jt != it->second.end()) return jt->second;
    }
    throw make_error("MissingParameter",
                     "no loading for edge " + g.label(i) + "->" + g.label(j));
  };
  for (int v = 1; v <= n; ++v)
    if (!variances.count(v))
      throw make_error("MissingParameter",
                       "no error variance for vertex " + g.label(v));
  // w[i][j] = sum over directed paths i -> j of the loading product.
  std::vector<std::vector<mpq_class>> w(n + 1,
                                        std::vector<mpq_class>(n + 1, 0));
  for (int i = 1; i <= n; ++i) {
    w[i][i] = 1;
    for (int j = i + 1; j <= n; ++j)
      for (int p : g.parents(j))
        if (w[i][p] != 0) w[i][j] += w[i][p] * lam(p, j);
  }
  std::vector<std::vector<mpq_class>> sigma(n + 1,
                                            std::vector<mpq_class>(n + 1, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      mpq_class s = 0;
      for (int k = 1; k <= n; ++k)
        if (w[k][i] != 0 && w[k][j] != 0)
          s += variances.at(k) * w[k][i] * w[k][j];
      sigma[i][j] = sigma[j][i] = s;
    }
  return sigma;
}

// ---------------------------------------------------------------------------
// Vanishing certificates.
// ---------------------------------------------------------------------------

struct VanishingResult {
  bool vanishes = false;
  Poly residual;  // image under the trek rule when nonzero
};

// Exact symbolic check: push f through the simple trek rule and expand.
inline VanishingResult certify_vanishing(const Dag& g, const Poly& f,
                                         Budget& budget) {
  TrekMap tm = simple_trek_rule(g);
  Poly fs = f.rename_into(tm.sigma);
  std::vector<const Poly*> images;
  for (const Poly& img : tm.image) images.push_back(&img);
  budget.charge(fs.term_count() + 1, "certify_vanishing");
  Poly out = fs.substitute(tm.target, images);
  return {out.is_zero(), out};
}

struct SampleWitness {
  int trial = 0;
  std::map<int, mpq_class> variances;
  std::map<int, std::map<int, mpq_class>> loadings;
  mpq_class value;
};

struct SampleReport {
  bool likely_member = true;
  int trials = 0;
  std::optional<SampleWitness> witness;
};

// Numeric membership screen: evaluate f at exact covariance matrices from
// pseudorandom positive rational parameters.  A nonzero value refutes
// membership; all-zero is evidence only.
inline SampleReport sample_membership(const Dag& g, const Poly& f, int trials,
                                      std::uint64_t seed) {
  RingPtr sr = sigma_ring(g.n());
  Poly fs = f.rename_into(sr);
  SampleReport rep;
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL +
                        static_cast<std::uint64_t>(trial));
    auto draw = [&]() {
      mpq_class q(static_cast<unsigned long>(rng() % 1000000 + 1),
                  static_cast<unsigned long>(rng() % 1000000 + 1));
      q.canonicalize();
      return q;
    };
    std::map<int, mpq_class> variances;
    std::map<int, std::map<int, mpq_class>> loadings;
    for (int v = 1; v <= g.n(); ++v) variances[v] = draw();
    for (auto [i, j] : g.edges()) loadings[i][j] = draw();
    auto sigma = covariance_from_params(g, variances, loadings);
    std::vector<mpq_class> point;
    for (int i = 1; i <= g.n(); ++i)
      for (int j = i; j <= g.n(); ++j) point.push_back(sigma[i][j]);
    mpq_class val = fs.evaluate(point);
    if (val != 0) {
      rep.likely_member = false;
      rep.witness = SampleWitness{trial, variances, loadings, val};
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The vanishing ideal by elimination: generators s_ij - phi(s_ij) with the
// diagonal variance symbols identified with the diagonal covariances, then
// eliminate the edge loadings.
// ---------------------------------------------------------------------------
inline IdealPresentation vanishing_ideal(const Dag& g, Budget& budget) {
  TrekMap tm = simple_trek_rule(g);
  int n = g.n();
  // System ring: edge loadings first (to be eliminated), then covariances.
  std::vector<std::string> names;
  for (auto [i, j] : g.edges()) names.push_back(lambda_name(i, j));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) names.push_back(sigma_name(i, j));
  RingPtr sys = make_ring(names);

  // Substitution images of the parameter ring generators: a_v becomes the
  // diagonal covariance s_vv, loadings stay themselves.
  std::vector<Poly> param_images;
  std::vector<const Poly*> image_ptrs;
  for (int v = 1; v <= n; ++v)
    param_images.push_back(Poly::variable(sys, sigma_name(v, v)));
  for (auto [i, j] : g.edges())
    param_images.push_back(Poly::variable(sys, lambda_name(i, j)));
  for (const Poly& p : param_images) image_ptrs.push_back(&p);

  std::vector<Poly> gens;
  int k = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j, ++k) {
      if (i == j) continue;  // diagonal images are the identity
      Poly rhs = tm.image[k].substitute(sys, image_ptrs);
      Poly lhs = Poly::variable(sys, sigma_name(i, j));
      gens.push_back(lhs - rhs);
    }
  std::set<int> drop;
  for (auto [i, j] : g.edges()) drop.insert(sys->var(lambda_name(i, j)));
  RingPtr sr = sigma_ring(n);
  IdealPresentation pres;
  pres.ring = sr;
  pres.gens = eliminate(gens, drop, sr, budget);
  pres.provenance = "elimination";
  return pres;
}

}  // namespace trektoric

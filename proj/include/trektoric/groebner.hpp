#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "trektoric/poly.hpp"

namespace trektoric {

// Full normal form: every reducible term is rewritten, so the remainder has
// no term divisible by any leading monomial of G.  Reducers are tried in
// list order, which keeps the result deterministic.
inline Poly normal_form(const Poly& f, const std::vector<Poly>& G,
                        const MonoOrder& ord, Budget& budget) {
  if (f.is_zero() || G.empty()) return f;
  std::vector<std::pair<Mono, mpq_class>> leads;
  for (const Poly& g : G) leads.push_back(g.lead(ord));

  Poly p = f;
  Poly remainder(f.ring());
  while (!p.is_zero()) {
    budget.charge(1 + p.term_count() / 8, "normal_form");
    auto [m, c] = p.lead(ord);
    bool reduced = false;
    for (size_t k = 0; k < G.size(); ++k) {
      if (!detail::mono_divides(leads[k].first, m)) continue;
      mpq_class factor = c / leads[k].second;
      Poly sub = factor * Poly::monomial(p.ring(), detail::mono_quotient(
                                                       m, leads[k].first));
      p = p - sub * G[k];
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.add_term(m, c);
      p.add_term(m, -c);
    }
  }
  return remainder;
}

// Buchberger's algorithm with the sugar selection strategy and the two
// classic useless-pair criteria (coprime leads; chain criterion).  Returns
// the reduced Groebner basis: minimal, tail reduced, coefficients integer
// with content one and positive leads, sorted.
inline std::vector<Poly> reduced_groebner(std::vector<Poly> gens,
                                          const MonoOrder& ord,
                                          Budget& budget,
                                          size_t max_basis = 20000) {
  std::vector<Poly> G;
  std::vector<long> sugar;
  for (Poly& g : gens) {
    if (g.is_zero()) continue;
    g.normalize(ord);
    G.push_back(g);
    sugar.push_back(g.degree());
  }
  if (G.empty()) return {};

  auto lead = [&](size_t i) { return G[i].lead(ord).first; };

  // Pair queue keyed by (sugar, lcm degree, i, j).
  std::set<std::tuple<long, long, size_t, size_t>> queue;
  std::set<std::pair<size_t, size_t>> done;
  auto push_pair = [&](size_t i, size_t j) {
    if (i > j) std::swap(i, j);
    Mono l = detail::mono_lcm(lead(i), lead(j));
    long lcm_deg = total_degree(l);
    long s = std::max(sugar[i] + lcm_deg - total_degree(lead(i)),
                      sugar[j] + lcm_deg - total_degree(lead(j)));
    queue.insert({s, lcm_deg, i, j});
  };
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = i + 1; j < G.size(); ++j) push_pair(i, j);

  while (!queue.empty()) {
    budget.charge(1, "buchberger");
    auto [s, lcm_deg, i, j] = *queue.begin();
    queue.erase(queue.begin());
    done.insert({i, j});
    Mono li = lead(i), lj = lead(j);
    if (detail::mono_coprime(li, lj)) continue;
    Mono l = detail::mono_lcm(li, lj);
    // Chain criterion: some other basis element divides the lcm and both
    // its pairs with i and j were already handled.
    bool skip = false;
    for (size_t k = 0; k < G.size() && !skip; ++k) {
      if (k == i || k == j) continue;
      if (!detail::mono_divides(lead(k), l)) continue;
      auto key1 = std::minmax(i, k), key2 = std::minmax(j, k);
      if (done.count({key1.first, key1.second}) &&
          done.count({key2.first, key2.second}))
        skip = true;
    }
    if (skip) continue;

    auto [mi, ci] = G[i].lead(ord);
    auto [mj, cj] = G[j].lead(ord);
    Poly spoly =
        Poly::monomial(G[i].ring(), detail::mono_quotient(l, mi),
                       mpq_class(1) / ci) *
            G[i] -
        Poly::monomial(G[j].ring(), detail::mono_quotient(l, mj),
                       mpq_class(1) / cj) *
            G[j];
    Poly r = normal_form(spoly, G, ord, budget);
    if (r.is_zero()) continue;
    r.normalize(ord);
    G.push_back(r);
    sugar.push_back(s);
    if (G.size() > max_basis)
      throw ResourceLimitExceeded("Groebner basis grew past limit");
    for (size_t k = 0; k + 1 < G.size(); ++k) push_pair(k, G.size() - 1);
  }

  // Minimalize: drop elements whose lead is divisible by another lead.
  std::vector<Poly> minimal;
  for (size_t i = 0; i < G.size(); ++i) {
    Mono li = lead(i);
    bool redundant = false;
    for (size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      Mono lj = lead(j);
      if (detail::mono_divides(lj, li) && (li != lj || j < i))
        redundant = true;
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  // Tail reduce each element against the others.
  std::vector<Poly> reduced;
  for (size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Poly> others;
    for (size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Poly r = normal_form(minimal[i], others, ord, budget);
    if (!r.is_zero()) {
      r.normalize(ord);
      reduced.push_back(r);
    }
  }
  normalize_generators(reduced, ord);
  return reduced;
}

inline std::vector<Poly> reduced_groebner(std::vector<Poly> gens,
                                          const MonoOrder& ord) {
  Budget b;
  return reduced_groebner(std::move(gens), ord, b);
}

// Membership: f lies in the ideal iff its normal form vanishes.
inline bool in_ideal(const Poly& f, const std::vector<Poly>& groebner,
                     const MonoOrder& ord, Budget& budget) {
  return normal_form(f, groebner, ord, budget).is_zero();
}

// Eliminate the given variables: Groebner basis under a block order with the
// dropped variables dominant, keep the elements free of them, and present
// the result in the subring of the remaining variables.
inline std::vector<Poly> eliminate(const std::vector<Poly>& gens,
                                   const std::set<int>& drop,
                                   const RingPtr& keep_ring, Budget& budget) {
  if (gens.empty()) return {};
  const RingPtr& ring = gens.front().ring();
  MonoOrder ord = elimination_order(*ring, drop);
  auto G = reduced_groebner(gens, ord, budget);
  std::vector<Poly> kept;
  for (const Poly& g : G) {
    bool free = true;
    for (int v : drop)
      if (g.uses_var(v)) {
        free = false;
        break;
      }
    if (free) kept.push_back(g.rename_into(keep_ring));
  }
  MonoOrder keep_ord = degrevlex(*keep_ring);
  normalize_generators(kept, keep_ord);
  return kept;
}

// Two generator lists span the same ideal iff their reduced Groebner bases
// under the same order coincide (the reduced basis is unique).
inline bool ideal_equal(const std::vector<Poly>& A, const std::vector<Poly>& B,
                        const RingPtr& ring, Budget& budget) {
  MonoOrder ord = degrevlex(*ring);
  std::vector<Poly> a2, b2;
  for (const Poly& f : A) a2.push_back(f.rename_into(ring));
  for (const Poly& f : B) b2.push_back(f.rename_into(ring));
  auto ga = reduced_groebner(std::move(a2), ord, budget);
  auto gb = reduced_groebner(std::move(b2), ord, budget);
  return ga == gb;
}

inline bool ideal_equal(const IdealPresentation& A,
                        const IdealPresentation& B, Budget& budget) {
  return ideal_equal(A.gens, B.gens, A.ring, budget);
}

// Saturation (I : x^inf) by adjoining an inverse: eliminate t from
// I + (t*x - 1).  Independent of the specialized binomial route, so the two
// can be cross-checked.
inline std::vector<Poly> saturate_generic(const std::vector<Poly>& gens,
                                          int var, const RingPtr& ring,
                                          Budget& budget) {
  std::vector<std::string> names = ring->vars;
  names.push_back("t_sat");
  RingPtr ext = make_ring(names);
  std::vector<Poly> J;
  for (const Poly& g : gens) J.push_back(g.rename_into(ext));
  Poly rel = Poly::variable(ext, "t_sat") *
                 Poly::variable(ext, ring->vars[var]) -
             Poly::constant(ext, 1);
  J.push_back(rel);
  return eliminate(J, {ext->var("t_sat")}, ring, budget);
}

inline bool is_binomial_presentation(const std::vector<Poly>& gens) {
  for (const Poly& g : gens)
    if (g.term_count() > 2) return false;
  return true;
}

// Pure difference of monomials (or a single monomial), up to content: the
// shape of generators of a toric ideal.
inline bool is_pure_difference_presentation(std::vector<Poly> gens,
                                            const MonoOrder& ord) {
  for (Poly& g : gens) {
    if (g.is_zero()) continue;
    g.normalize(ord);
    if (g.term_count() > 2) return false;
    std::vector<mpq_class> cs;
    for (const auto& [m, c] : g.terms()) cs.push_back(c);
    if (cs.size() == 1 && abs(cs[0]) != 1) return false;
    if (cs.size() == 2 && !(abs(cs[0]) == 1 && cs[0] + cs[1] == 0))
      return false;
  }
  return true;
}

}  // namespace trektoric

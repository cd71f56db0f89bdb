#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "trektoric/poly.hpp"

namespace trektoric {

// Pure-difference binomial x^lead - x^tail, or a plain monomial x^lead.
// This class of polynomials is closed under S-pairs and reduction, which
// makes Groebner computations on lattice and separation ideals far cheaper
// than in the generic engine.
struct Binomial {
  Mono lead;
  std::optional<Mono> tail;

  bool is_monomial() const { return !tail.has_value(); }
  bool operator==(const Binomial& o) const {
    return lead == o.lead && tail == o.tail;
  }
};

// Orient a difference x^u - x^v; equal sides cancel to nothing.
inline std::optional<Binomial> make_binomial(const Mono& u, const Mono& v,
                                             const MonoOrder& ord) {
  int c = ord.cmp(u, v);
  if (c == 0) return std::nullopt;
  if (c > 0) return Binomial{u, v};
  return Binomial{v, u};
}

namespace detail {

// Fully reduce a monomial: rewrite by binomials, die on monomial members.
inline std::optional<Mono> reduce_mono(Mono m,
                                       const std::vector<Binomial>& basis,
                                       Budget& budget) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Binomial& b : basis) {
      if (!mono_divides(b.lead, m)) continue;
      budget.charge(1, "binomial reduce");
      if (b.is_monomial()) return std::nullopt;
      for (size_t k = 0; k < m.size(); ++k)
        m[k] = m[k] - b.lead[k] + (*b.tail)[k];
      changed = true;
      break;
    }
  }
  return m;
}

}  // namespace detail

// Reduce a binomial (or monomial) to normal form against a basis.
inline std::optional<Binomial> reduce_binomial(
    const Binomial& f, const std::vector<Binomial>& basis,
    const MonoOrder& ord, Budget& budget) {
  auto lead = detail::reduce_mono(f.lead, basis, budget);
  if (f.is_monomial()) {
    if (!lead) return std::nullopt;
    return Binomial{*lead, std::nullopt};
  }
  auto tail = detail::reduce_mono(*f.tail, basis, budget);
  if (!lead && !tail) return std::nullopt;
  if (!lead) return Binomial{*tail, std::nullopt};
  if (!tail) return Binomial{*lead, std::nullopt};
  auto out = make_binomial(*lead, *tail, ord);
  if (!out) return std::nullopt;
  return out;
}

// Buchberger specialized to binomials.  Returns the reduced basis, sorted.
inline std::vector<Binomial> reduced_groebner_binomial(
    std::vector<Binomial> gens, const MonoOrder& ord, Budget& budget,
    size_t max_basis = 200000) {
  std::vector<Binomial> G;
  for (const Binomial& g : gens) {
    auto r = reduce_binomial(g, G, ord, budget);
    if (r) G.push_back(*r);
  }

  std::set<std::tuple<long, size_t, size_t>> queue;
  std::set<std::pair<size_t, size_t>> done;
  auto push_pair = [&](size_t i, size_t j) {
    if (i > j) std::swap(i, j);
    if (G[i].is_monomial() && G[j].is_monomial()) return;
    Mono l = detail::mono_lcm(G[i].lead, G[j].lead);
    queue.insert({total_degree(l), i, j});
  };
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = i + 1; j < G.size(); ++j) push_pair(i, j);

  while (!queue.empty()) {
    budget.charge(1, "binomial buchberger");
    auto [ldeg, i, j] = *queue.begin();
    queue.erase(queue.begin());
    done.insert({i, j});
    const Binomial &f = G[i], &g = G[j];
    if (detail::mono_coprime(f.lead, g.lead)) continue;
    Mono l = detail::mono_lcm(f.lead, g.lead);
    bool skip = false;
    for (size_t k = 0; k < G.size() && !skip; ++k) {
      if (k == i || k == j) continue;
      if (!detail::mono_divides(G[k].lead, l)) continue;
      auto k1 = std::minmax(i, k), k2 = std::minmax(j, k);
      if (done.count({k1.first, k1.second}) &&
          done.count({k2.first, k2.second}))
        skip = true;
    }
    if (skip) continue;

    // S-pair within the binomial class.
    std::optional<Binomial> s;
    auto shift = [&](const Mono& m, const Mono& lead_part) {
      Mono out(m);
      for (size_t k = 0; k < out.size(); ++k)
        out[k] += l[k] - lead_part[k];
      return out;
    };
    if (!f.is_monomial() && !g.is_monomial()) {
      Mono A = shift(*f.tail, f.lead), B = shift(*g.tail, g.lead);
      s = make_binomial(A, B, ord);
    } else if (!f.is_monomial() && g.is_monomial()) {
      s = Binomial{shift(*f.tail, f.lead), std::nullopt};
    } else if (f.is_monomial() && !g.is_monomial()) {
      s = Binomial{shift(*g.tail, g.lead), std::nullopt};
    }
    if (!s) continue;
    auto r = reduce_binomial(*s, G, ord, budget);
    if (!r) continue;
    G.push_back(*r);
    if (G.size() > max_basis)
      throw ResourceLimitExceeded("binomial basis grew past limit");
    for (size_t k = 0; k + 1 < G.size(); ++k) push_pair(k, G.size() - 1);
  }

  // Minimalize by leads, then tail-reduce.
  std::vector<Binomial> minimal;
  for (size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      if (detail::mono_divides(G[j].lead, G[i].lead) &&
          (G[i].lead != G[j].lead || j < i))
        redundant = true;
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  std::vector<Binomial> reduced;
  for (size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Binomial> others;
    for (size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    auto r = reduce_binomial(minimal[i], others, ord, budget);
    if (r) reduced.push_back(*r);
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Binomial& a, const Binomial& b) {
              int c = ord.cmp(a.lead, b.lead);
              if (c != 0) return c < 0;
              if (a.is_monomial() != b.is_monomial()) return a.is_monomial();
              if (a.is_monomial()) return false;
              return ord.less(*a.tail, *b.tail);
            });
  return reduced;
}

// Divide out the largest common power of one variable (for a monomial,
// strip the variable entirely).  Correct as a saturation step only for
// bases computed under an order making that variable cheapest.
inline Binomial divide_out_var(Binomial b, int v) {
  if (b.is_monomial()) {
    b.lead[v] = 0;
    return b;
  }
  int c = std::min(b.lead[v], (*b.tail)[v]);
  b.lead[v] -= c;
  (*b.tail)[v] -= c;
  return b;
}

inline Poly binomial_to_poly(const Binomial& b, const RingPtr& ring) {
  Poly p = Poly::monomial(ring, b.lead);
  if (!b.is_monomial()) p.add_term(*b.tail, -1);
  return p;
}

inline std::optional<Binomial> poly_to_binomial(const Poly& p,
                                                const MonoOrder& ord) {
  if (p.is_zero()) return std::nullopt;
  Poly q = p;
  q.normalize(ord);
  if (q.term_count() == 1) {
    const auto& [m, c] = *q.terms().begin();
    if (abs(c) != 1) return std::nullopt;
    return Binomial{m, std::nullopt};
  }
  if (q.term_count() != 2) return std::nullopt;
  auto it = q.terms().begin();
  auto [m1, c1] = *it;
  auto [m2, c2] = *std::next(it);
  if (!(abs(c1) == 1 && c1 + c2 == 0)) return std::nullopt;
  return make_binomial(m1, m2, ord);
}

}  // namespace trektoric

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trektoric/binomial.hpp"
#include "trektoric/budget.hpp"
#include "trektoric/groebner.hpp"
#include "trektoric/intlinalg.hpp"
#include "trektoric/model_maps.hpp"
#include "trektoric/separation.hpp"

namespace trektoric {

namespace detail {

// Orders over plain column indices (no named ring needed).
inline MonoOrder column_degrevlex(int cols) {
  MonoOrder::Block b;
  for (int k = 0; k < cols; ++k) b.vars.push_back(k);
  b.weights.assign(cols, 1);
  return MonoOrder{{b}};
}

inline MonoOrder column_grevlex_cheapest(int cols, int cheapest,
                                         const std::vector<long>& weights) {
  MonoOrder::Block b;
  for (int k = 0; k < cols; ++k)
    if (k != cheapest) b.vars.push_back(k);
  b.vars.push_back(cheapest);
  for (int v : b.vars) b.weights.push_back(weights[v]);
  return MonoOrder{{b}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Markov basis of the lattice ideal of ker M, for a matrix with nonnegative
// entries and no zero column.  A basis of the integer kernel seeds binomial
// generators; the ideal they span is then saturated one variable at a time.
// Each saturation step runs under the weighted order (weights = column sums,
// a positive grading every kernel binomial is homogeneous for) that makes
// the chosen variable cheapest, which exposes the full common power of that
// variable on every basis element.  The result is returned as the reduced
// binomial Groebner basis under graded reverse lexicographic order, so the
// output is canonical for the matrix.
// ---------------------------------------------------------------------------
inline std::vector<Binomial> markov_basis(const IntMatrix& M, Budget& budget) {
  for (int c = 0; c < M.cols; ++c) {
    bool nonzero = false;
    for (int r = 0; r < M.rows; ++r) {
      if (M.at(r, c) < 0)
        throw make_error("InvalidExponentMatrix",
                         "negative entry in exponent matrix");
      if (M.at(r, c) != 0) nonzero = true;
    }
    if (!nonzero)
      throw make_error("InvalidExponentMatrix",
                       "zero column in exponent matrix");
  }
  int cols = M.cols;
  MonoOrder final_ord = detail::column_degrevlex(cols);
  std::vector<Binomial> basis;
  for (const auto& u : lattice_kernel(M)) {
    Mono p(cols, 0), q(cols, 0);
    for (int k = 0; k < cols; ++k) {
      if (!u[k].fits_sint_p())
        throw make_error("ResourceLimitExceeded", "kernel entry too large");
      int e = static_cast<int>(u[k].get_si());
      if (e > 0) p[k] = e;
      if (e < 0) q[k] = -e;
    }
    if (auto b = make_binomial(p, q, final_ord)) basis.push_back(*b);
  }
  if (basis.empty()) return basis;

  std::vector<long> weights(cols, 0);
  for (int c = 0; c < cols; ++c) {
    mpz_class s = 0;
    for (int r = 0; r < M.rows; ++r) s += M.at(r, c);
    if (!s.fits_slong_p())
      throw make_error("ResourceLimitExceeded", "column sum too large");
    weights[c] = s.get_si();
  }
  for (int v = 0; v < cols; ++v) {
    MonoOrder ord = detail::column_grevlex_cheapest(cols, v, weights);
    basis = reduced_groebner_binomial(basis, ord, budget);
    for (Binomial& b : basis) b = divide_out_var(b, v);
  }
  return reduced_groebner_binomial(basis, final_ord, budget);
}

// The shortest trek ideal: Markov-basis binomials of the exponent matrix
// plus one linear monomial per trek-disconnected pair.
inline IdealPresentation st_ideal(const Dag& g, Budget& budget) {
  ExponentMatrix em = exponent_matrix(g);
  RingPtr sr = sigma_ring(g.n());
  std::vector<Poly> gens;
  if (em.M.cols > 0) {
    std::vector<std::string> names;
    for (Edge e : em.columns) names.push_back(sigma_name(e.first, e.second));
    RingPtr colring = make_ring(names);
    for (const Binomial& b : markov_basis(em.M, budget))
      gens.push_back(binomial_to_poly(b, colring).rename_into(sr));
  }
  for (Edge e : em.zero_pairs)
    gens.push_back(Poly::variable(sr, sigma_name(e.first, e.second)));
  MonoOrder ord = degrevlex(*sr);
  normalize_generators(gens, ord);
  return {sr, gens, "markov"};
}

// ---------------------------------------------------------------------------
// Fibers: all monomials with a prescribed exponent-matrix value.
// ---------------------------------------------------------------------------
inline std::vector<Mono> fiber(const IntMatrix& M,
                               const std::vector<mpz_class>& b, Budget& budget,
                               size_t cap = 100000) {
  if (static_cast<int>(b.size()) != M.rows)
    throw make_error("MalformedDocument", "value vector length mismatch");
  // reach[r][c]: some column at index >= c has a positive entry in row r.
  std::vector<std::vector<bool>> reach(M.rows,
                                       std::vector<bool>(M.cols + 1, false));
  for (int r = 0; r < M.rows; ++r)
    for (int c = M.cols; c-- > 0;)
      reach[r][c] = reach[r][c + 1] || M.at(r, c) > 0;
  std::vector<Mono> out;
  Mono cur(M.cols, 0);
  std::vector<mpz_class> rem = b;
  std::function<void(int)> rec = [&](int c) {
    budget.charge(1, "fiber");
    for (int r = 0; r < M.rows; ++r) {
      if (rem[r] < 0) return;
      if (rem[r] > 0 && !reach[r][c]) return;
    }
    if (c == M.cols) {
      out.push_back(cur);
      if (out.size() > cap)
        throw make_error("ResourceLimitExceeded",
                         "fiber exceeds the enumeration cap");
      return;
    }
    mpz_class emax = -1;
    for (int r = 0; r < M.rows; ++r)
      if (M.at(r, c) > 0) {
        mpz_class q = rem[r] / M.at(r, c);
        if (emax < 0 || q < emax) emax = q;
      }
    for (mpz_class e = 0; e <= emax; ++e) {
      if (!e.fits_sint_p()) break;
      cur[c] = static_cast<int>(e.get_si());
      for (int r = 0; r < M.rows; ++r) rem[r] = rem[r] - e * M.at(r, c);
      rec(c + 1);
      for (int r = 0; r < M.rows; ++r) rem[r] = rem[r] + e * M.at(r, c);
      cur[c] = 0;
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// Union-find component id per fiber element under the given moves.
inline std::vector<int> move_components(const std::vector<Mono>& elements,
                                        const std::vector<Binomial>& moves,
                                        Budget& budget) {
  std::map<Mono, int> index;
  for (size_t k = 0; k < elements.size(); ++k)
    index[elements[k]] = static_cast<int>(k);
  std::vector<int> parent(elements.size());
  for (size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto apply_move = [&](size_t k, const Mono& from, const Mono& to) {
    if (!detail::mono_divides(from, elements[k])) return;
    Mono target = elements[k];
    for (size_t v = 0; v < target.size(); ++v) target[v] += to[v] - from[v];
    auto it = index.find(target);
    if (it == index.end()) return;
    int a = find(static_cast<int>(k)), bb = find(it->second);
    if (a != bb) parent[a] = bb;
  };
  for (size_t k = 0; k < elements.size(); ++k)
    for (const Binomial& mv : moves) {
      if (!mv.tail) continue;  // a monomial is not a rewrite move
      budget.charge(1, "fiber_connected");
      apply_move(k, mv.lead, *mv.tail);
      apply_move(k, *mv.tail, mv.lead);
    }
  std::vector<int> root(elements.size());
  for (size_t k = 0; k < elements.size(); ++k)
    root[k] = find(static_cast<int>(k));
  return root;
}

}  // namespace detail

struct FiberReport {
  bool connected = true;
  std::vector<Mono> elements;
  std::optional<std::pair<Mono, Mono>> witness;  // elements never joined
};

inline FiberReport fiber_connected(const IntMatrix& M,
                                   const std::vector<mpz_class>& b,
                                   const std::vector<Binomial>& moves,
                                   Budget& budget) {
  FiberReport rep;
  rep.elements = fiber(M, b, budget);
  if (rep.elements.size() <= 1) return rep;
  auto root = detail::move_components(rep.elements, moves, budget);
  for (size_t k = 1; k < rep.elements.size(); ++k)
    if (root[k] != root[0]) {
      rep.connected = false;
      rep.witness = {rep.elements[0], rep.elements[k]};
      break;
    }
  return rep;
}

struct GenerationReport {
  bool generates = true;
  int degree_bound = 0;
  std::optional<std::vector<mpz_class>> witness_value;  // split fiber's value
  std::optional<std::pair<Mono, Mono>> witness;
};

// Whether the moves connect every fiber of total degree at most the bound,
// i.e. whether they generate every binomial of the lattice ideal up to that
// degree.
inline GenerationReport verify_generates(const IntMatrix& M,
                                         const std::vector<Binomial>& moves,
                                         int degree_bound, Budget& budget) {
  GenerationReport rep;
  rep.degree_bound = degree_bound;
  std::map<std::vector<mpz_class>, std::vector<Mono>> groups;
  Mono cur(M.cols, 0);
  std::function<void(int, int)> rec = [&](int c, int left) {
    budget.charge(1, "verify_generates");
    if (c == M.cols) {
      groups[M.apply_int(cur)].push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[c] = e;
      rec(c + 1, left - e);
    }
    cur[c] = 0;
  };
  rec(0, degree_bound);
  for (auto& [value, elements] : groups) {
    if (elements.size() <= 1) continue;
    std::sort(elements.begin(), elements.end());
    auto root = detail::move_components(elements, moves, budget);
    for (size_t k = 1; k < elements.size(); ++k)
      if (root[k] != root[0]) {
        rep.generates = false;
        rep.witness_value = value;
        rep.witness = {elements[0], elements[k]};
        return rep;
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certificates.
// ---------------------------------------------------------------------------
struct Certificate {
  std::string claim;
  std::string result;
  std::vector<std::string> evidence;
  std::vector<std::string> assumptions;
};

// Decide whether the vanishing ideal equals the shortest trek ideal.  The
// refutation direction is assumption-free: a trek generator that fails to
// vanish under the trek rule separates the two ideals.  The confirmation
// direction combines proved facts (every trek generator vanishes; the trek
// ideal is prime because the integer kernel is saturated; its dimension is
// the exponent matrix rank) with one recorded assumption on the dimension
// of the vanishing ideal.
inline Certificate certify_I_equals_ST(const Dag& g, Budget& budget) {
  Certificate cert;
  cert.claim = "the vanishing ideal equals the shortest trek ideal";
  auto stm = shortest_trek_map(g);
  if (std::holds_alternative<ShortestTrekUndefined>(stm)) {
    const auto& w = std::get<ShortestTrekUndefined>(stm);
    cert.result = "NotEqual";
    cert.evidence.push_back(
        "the shortest trek map is undefined: tied shortest treks between " +
        g.label(w.i) + " and " + g.label(w.j) + " (" + trek_text(g, w.first) +
        " and " + trek_text(g, w.second) + ")");
    return cert;
  }
  IdealPresentation st = st_ideal(g, budget);
  MonoOrder ord = degrevlex(*st.ring);
  for (const Poly& f : st.gens) {
    auto res = certify_vanishing(g, f, budget);
    if (!res.vanishes) {
      cert.result = "NotEqual";
      cert.evidence.push_back("trek generator " + poly_text(f, ord) +
                              " does not vanish under the trek rule");
      return cert;
    }
  }
  cert.evidence.push_back(
      "all " + std::to_string(st.gens.size()) +
      " shortest trek generators vanish under the trek rule, so the trek "
      "ideal is contained in the vanishing ideal");
  ExponentMatrix em = exponent_matrix(g);
  int expected = g.n() + static_cast<int>(g.edges().size());
  int rank = em.M.cols > 0 ? exact_rank(em.M) : 0;
  cert.assumptions.push_back(
      "the vanishing ideal is prime of dimension " + std::to_string(expected) +
      " (vertex count plus edge count)");
  if (rank != expected) {
    cert.result = "NotEqual";
    cert.evidence.push_back("the exponent matrix has rank " +
                            std::to_string(rank) + ", not " +
                            std::to_string(expected) +
                            ", so the two ideals differ in dimension");
    return cert;
  }
  cert.evidence.push_back("the exponent matrix has full rank " +
                          std::to_string(expected));
  cert.evidence.push_back(
      "the integer kernel of the exponent matrix is saturated, so the trek "
      "ideal is prime of that dimension; a prime contained in a prime of "
      "the same dimension equals it");
  cert.result = "IequalsST";
  return cert;
}

// Decide whether the shortest trek ideal is generated by the independence
// relations: the vanishing covariances of trek-disconnected pairs plus the
// quadratic move of each single-vertex separation statement.  The claim is
// bounded: fibers are checked up to the given total degree.
inline Certificate certify_ST_equals_CI(const Dag& g, int degree_bound,
                                        Budget& budget) {
  Certificate cert;
  cert.claim =
      "the shortest trek ideal is generated by the independence relations "
      "(checked on fibers of total degree at most " +
      std::to_string(degree_bound) + ")";
  auto stm = shortest_trek_map(g);
  if (std::holds_alternative<ShortestTrekUndefined>(stm)) {
    const auto& w = std::get<ShortestTrekUndefined>(stm);
    cert.result = "NotEqual";
    cert.evidence.push_back(
        "the shortest trek map is undefined: tied shortest treks between " +
        g.label(w.i) + " and " + g.label(w.j));
    return cert;
  }
  ExponentMatrix em = exponent_matrix(g);
  SeparationMoves sm = separation_moves(g);
  if (em.zero_pairs != sm.zero_pairs)
    throw make_error("InternalError",
                     "trek-disconnected pairs disagree with marginal "
                     "independences");
  cert.evidence.push_back(
      std::to_string(em.zero_pairs.size()) +
      " vanishing covariances match the trek-disconnected pairs exactly");
  std::map<Edge, int> col;
  for (size_t c = 0; c < em.columns.size(); ++c)
    col[em.columns[c]] = static_cast<int>(c);
  std::set<Edge> zero(em.zero_pairs.begin(), em.zero_pairs.end());
  auto is_zero = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    return zero.count({i, j}) > 0;
  };
  auto col_of = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    return col.at({i, j});
  };
  MonoOrder ord = detail::column_degrevlex(em.M.cols);
  std::vector<Binomial> moves;
  for (const QuadStatement& q : sm.quadrics) {
    auto [r1, r2] = q.rows;
    auto [l1, l2] = q.cols;
    std::string where = "the minor of rows {" + g.label(r1) + ", " +
                        g.label(r2) + "} and columns {" + g.label(l1) + ", " +
                        g.label(l2) + "} from conditioning on " + g.label(q.c);
    // The minor is s_{r1 l1} s_{r2 l2} - s_{r1 l2} s_{r2 l1}; reduce it
    // modulo the vanishing covariances before treating it as a move.
    bool first_alive = !is_zero(r1, l1) && !is_zero(r2, l2);
    bool second_alive = !is_zero(r1, l2) && !is_zero(r2, l1);
    if (!first_alive && !second_alive) continue;  // absorbed entirely
    if (first_alive != second_alive) {
      // One product survives: an independence monomial in covariances that
      // are all trek-connected, which no trek monomial map can kill.
      cert.result = "NotEqual";
      cert.evidence.push_back(
          where + " degenerates to a monomial outside the trek ideal");
      return cert;
    }
    Mono u(em.M.cols, 0), v(em.M.cols, 0);
    u[col_of(r1, l1)] += 1;
    u[col_of(r2, l2)] += 1;
    v[col_of(r1, l2)] += 1;
    v[col_of(r2, l1)] += 1;
    if (em.M.apply_int(u) != em.M.apply_int(v)) {
      cert.result = "NotEqual";
      cert.evidence.push_back(where +
                              " is a quadric outside the shortest trek ideal");
      return cert;
    }
    if (auto b = make_binomial(u, v, ord)) moves.push_back(*b);
  }
  cert.evidence.push_back(
      "all " + std::to_string(moves.size()) +
      " single-vertex independence moves preserve the exponent vector, so "
      "the independence relations lie inside the trek ideal");
  std::vector<std::string> names;
  for (Edge e : em.columns) names.push_back(sigma_name(e.first, e.second));
  RingPtr colring = make_ring(names);
  auto rep = verify_generates(em.M, moves, degree_bound, budget);
  if (!rep.generates) {
    cert.result = "NotEqual";
    cert.evidence.push_back(
        "the fiber containing " + mono_text(*colring, rep.witness->first) +
        " and " + mono_text(*colring, rep.witness->second) +
        " is not connected by the independence moves, so their difference "
        "is a trek-ideal member the independence relations miss");
    return cert;
  }
  cert.evidence.push_back(
      "every fiber of the exponent matrix up to total degree " +
      std::to_string(degree_bound) + " is connected by the moves");
  cert.assumptions.push_back(
      "the shortest trek ideal is generated in total degree at most " +
      std::to_string(degree_bound));
  cert.result = "STequalsCI";
  return cert;
}

}  // namespace trektoric

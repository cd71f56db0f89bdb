#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trektoric/budget.hpp"

namespace trektoric {

using Mono = std::vector<int>;  // exponent vector over a fixed ring

inline int total_degree(const Mono& m) {
  return std::accumulate(m.begin(), m.end(), 0);
}

namespace detail {

inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

inline Mono mono_quotient(const Mono& b, const Mono& a) {  // b / a
  Mono q(b);
  for (size_t k = 0; k < q.size(); ++k) q[k] -= a[k];
  return q;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono m(a);
  for (size_t k = 0; k < m.size(); ++k) m[k] = std::max(m[k], b[k]);
  return m;
}

inline bool mono_coprime(const Mono& a, const Mono& b) {
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] > 0 && b[k] > 0) return false;
  return true;
}

}  // namespace detail

// A polynomial ring is just an ordered list of named variables.
struct Ring {
  std::vector<std::string> vars;
  std::map<std::string, int> index;

  explicit Ring(std::vector<std::string> names) : vars(std::move(names)) {
    for (size_t k = 0; k < vars.size(); ++k) {
      if (!index.emplace(vars[k], static_cast<int>(k)).second)
        throw make_error("MalformedDocument", "duplicate variable " + vars[k]);
    }
  }
  int size() const { return static_cast<int>(vars.size()); }
  int var(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end())
      throw make_error("MalformedDocument", "unknown variable " + name);
    return it->second;
  }
  bool operator==(const Ring& o) const { return vars == o.vars; }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(std::vector<std::string> names) {
  return std::make_shared<const Ring>(std::move(names));
}

// Conventional variable names.  Vertex indices are separated by an
// underscore so double-digit vertices stay unambiguous.
inline std::string sigma_name(int i, int j) {
  if (i > j) std::swap(i, j);
  return "s" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string lambda_name(int i, int j) {
  return "l" + std::to_string(i) + "_" + std::to_string(j);
}
inline std::string a_name(int i) { return "a" + std::to_string(i); }
inline std::string d_name(int i) { return "d" + std::to_string(i); }

// ---------------------------------------------------------------------------
// Monomial orders: weighted reverse lexicographic, in one or more blocks.
// Earlier blocks dominate (product order), which gives elimination orders.
// Within a block the weighted degree decides first; ties fall to reverse
// lexicographic, where the block's last listed variable is cheapest.
// ---------------------------------------------------------------------------
struct MonoOrder {
  struct Block {
    std::vector<int> vars;      // variable indices, most significant first
    std::vector<long> weights;  // parallel to vars, all positive
  };
  std::vector<Block> blocks;

  // -1 if a < b, 0 if equal, +1 if a > b.
  int cmp(const Mono& a, const Mono& b) const {
    for (const Block& blk : blocks) {
      long da = 0, db = 0;
      for (size_t k = 0; k < blk.vars.size(); ++k) {
        da += blk.weights[k] * a[blk.vars[k]];
        db += blk.weights[k] * b[blk.vars[k]];
      }
      if (da != db) return da > db ? 1 : -1;
      for (size_t k = blk.vars.size(); k-- > 0;) {
        int va = a[blk.vars[k]], vb = b[blk.vars[k]];
        if (va != vb) return va < vb ? 1 : -1;
      }
    }
    return 0;
  }
  bool less(const Mono& a, const Mono& b) const { return cmp(a, b) < 0; }
  bool greater(const Mono& a, const Mono& b) const { return cmp(a, b) > 0; }
};

inline MonoOrder degrevlex(const Ring& r) {
  MonoOrder::Block b;
  for (int k = 0; k < r.size(); ++k) b.vars.push_back(k);
  b.weights.assign(r.size(), 1);
  return MonoOrder{{b}};
}

// Elimination order: the variables in `drop` form the dominant block, so any
// Groebner element whose lead avoids them lies in the subring of the rest.
inline MonoOrder elimination_order(const Ring& r, const std::set<int>& drop) {
  MonoOrder::Block first, second;
  for (int k = 0; k < r.size(); ++k)
    (drop.count(k) ? first : second).vars.push_back(k);
  first.weights.assign(first.vars.size(), 1);
  second.weights.assign(second.vars.size(), 1);
  MonoOrder o;
  if (!first.vars.empty()) o.blocks.push_back(first);
  if (!second.vars.empty()) o.blocks.push_back(second);
  return o;
}

// Weighted reverse lexicographic with a chosen cheapest variable: the order
// used to saturate an ideal homogeneous under `weights` by that variable.
inline MonoOrder grevlex_cheapest(const Ring& r, int cheapest,
                                  const std::vector<long>& weights) {
  MonoOrder::Block b;
  for (int k = 0; k < r.size(); ++k)
    if (k != cheapest) b.vars.push_back(k);
  b.vars.push_back(cheapest);
  for (int v : b.vars) b.weights.push_back(weights[v]);
  return MonoOrder{{b}};
}

// ---------------------------------------------------------------------------
// Sparse exact polynomials.  Terms are stored under the plain lexicographic
// order of exponent vectors, which keeps storage deterministic and leaves
// the display / division order a separate concern.
// ---------------------------------------------------------------------------
class Poly {
 public:
  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

  static Poly zero(RingPtr ring) { return Poly(std::move(ring)); }
  static Poly constant(RingPtr ring, const mpq_class& c) {
    Poly p(ring);
    if (c != 0) p.terms_[Mono(ring->size(), 0)] = c;
    return p;
  }
  static Poly monomial(RingPtr ring, const Mono& m,
                       const mpq_class& c = 1) {
    Poly p(ring);
    if (c != 0) p.terms_[m] = c;
    return p;
  }
  static Poly variable(RingPtr ring, int v, int exp = 1) {
    Mono m(ring->size(), 0);
    m[v] = exp;
    return monomial(std::move(ring), m);
  }
  static Poly variable(RingPtr ring, const std::string& name) {
    int v = ring->var(name);
    return variable(std::move(ring), v);
  }

  const RingPtr& ring() const { return ring_; }
  const std::map<Mono, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  bool uses_var(int v) const {
    for (const auto& [m, c] : terms_)
      if (m[v] > 0) return true;
    return false;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  void add_term(const Mono& m, const mpq_class& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend Poly operator+(Poly a, const Poly& b) {
    for (const auto& [m, c] : b.terms_) a.add_term(m, c);
    return a;
  }
  friend Poly operator-(Poly a, const Poly& b) {
    for (const auto& [m, c] : b.terms_) a.add_term(m, -c);
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out(a.ring_ ? a.ring_ : b.ring_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m(ma);
        for (size_t k = 0; k < m.size(); ++k) m[k] += mb[k];
        out.add_term(m, ca * cb);
      }
    return out;
  }
  friend Poly operator*(const mpq_class& c, Poly p) {
    if (c == 0) return Poly(p.ring_);
    for (auto& [m, q] : p.terms_) q *= c;
    return p;
  }
  Poly operator-() const { return mpq_class(-1) * (*this); }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // Leading term under the given order.
  std::pair<Mono, mpq_class> lead(const MonoOrder& ord) const {
    if (terms_.empty())
      throw make_error("InternalError", "lead of zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
      if (ord.greater(it->first, best->first)) best = it;
    return {best->first, best->second};
  }

  // Scale so all coefficients are coprime integers and the order-leading
  // coefficient is positive.
  void normalize(const MonoOrder& ord) {
    if (terms_.empty()) return;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [m, c] : terms_) {
      den_lcm = lcm(den_lcm, c.get_den());
      num_gcd = gcd(num_gcd, c.get_num());
    }
    mpq_class scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (lead(ord).second * scale < 0) scale = -scale;
    for (auto& [m, c] : terms_) c *= scale;
  }

  // Carry this polynomial into another ring by matching variable names.
  // Only variables that actually occur need to exist in the target.
  Poly rename_into(const RingPtr& target) const {
    std::vector<int> map(ring_->size(), -1);
    Poly out(target);
    for (const auto& [m, c] : terms_) {
      Mono nm(target->size(), 0);
      for (int k = 0; k < ring_->size(); ++k) {
        if (m[k] == 0) continue;
        if (map[k] < 0) map[k] = target->var(ring_->vars[k]);
        nm[map[k]] = m[k];
      }
      out.add_term(nm, c);
    }
    return out;
  }

  // Substitute polynomials for variables.  `images[v]` replaces variable v;
  // a null entry keeps the variable (which must then exist in the target).
  Poly substitute(const RingPtr& target,
                  const std::vector<const Poly*>& images) const {
    Poly out(target);
    for (const auto& [m, c] : terms_) {
      Poly term = Poly::constant(target, c);
      for (int v = 0; v < ring_->size(); ++v) {
        if (m[v] == 0) continue;
        Poly base = images[v] ? *images[v]
                              : Poly::variable(target, ring_->vars[v]);
        for (int e = 0; e < m[v]; ++e) term = term * base;
      }
      out += term;
    }
    return out;
  }

  mpq_class evaluate(const std::vector<mpq_class>& point) const {
    mpq_class total = 0;
    for (const auto& [m, c] : terms_) {
      mpq_class t = c;
      for (size_t v = 0; v < m.size(); ++v)
        for (int e = 0; e < m[v]; ++e) t *= point[v];
      total += t;
    }
    return total;
  }

 private:
  RingPtr ring_;
  std::map<Mono, mpq_class> terms_;
};

// ---------------------------------------------------------------------------
// Text form.  Grammar (whitespace insensitive):
//   poly   := [sign] term (sign term)*
//   term   := coef | coef '*' factors | factors
//   factors:= var ('^' int)? ('*' var ('^' int)?)*
//   coef   := int | int '/' int
// Variables follow the naming scheme above, e.g.  s1_2, a3, l2_4, d1.
// ---------------------------------------------------------------------------
inline std::string mono_text(const Ring& r, const Mono& m) {
  std::string s;
  for (size_t v = 0; v < m.size(); ++v) {
    if (m[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += r.vars[v];
    if (m[v] > 1) s += "^" + std::to_string(m[v]);
  }
  return s.empty() ? "1" : s;
}

inline std::string poly_text(const Poly& p, const MonoOrder& ord) {
  if (p.is_zero()) return "0";
  std::vector<const Mono*> ms;
  for (const auto& [m, c] : p.terms()) ms.push_back(&m);
  std::sort(ms.begin(), ms.end(),
            [&](const Mono* a, const Mono* b) { return ord.greater(*a, *b); });
  std::string out;
  for (const Mono* m : ms) {
    const mpq_class& c = p.terms().at(*m);
    mpq_class ac = abs(c);
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    std::string mono = mono_text(*p.ring(), *m);
    if (mono == "1")
      out += ac.get_str();
    else if (ac == 1)
      out += mono;
    else
      out += ac.get_str() + "*" + mono;
  }
  return out;
}

inline std::string poly_text(const Poly& p) {
  return poly_text(p, degrevlex(*p.ring()));
}

inline Poly parse_poly(const RingPtr& ring, const std::string& text) {
  Poly out(ring);
  size_t k = 0;
  auto skip = [&] {
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k])))
      ++k;
  };
  auto parse_int = [&]() -> mpz_class {
    skip();
    size_t start = k;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])))
      ++k;
    if (k == start)
      throw make_error("ParseError", "expected integer at offset " +
                                         std::to_string(start) + " in: " + text);
    return mpz_class(text.substr(start, k - start));
  };
  skip();
  {
    std::string rest = text.substr(k);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back())))
      rest.pop_back();
    if (rest == "0") return out;
  }
  bool first = true;
  while (true) {
    skip();
    if (k >= text.size()) {
      if (first)
        throw make_error("ParseError", "empty polynomial text");
      break;
    }
    mpq_class sign = 1;
    if (text[k] == '+' || text[k] == '-') {
      sign = text[k] == '-' ? -1 : 1;
      ++k;
    } else if (!first) {
      throw make_error("ParseError", "expected + or - at offset " +
                                         std::to_string(k) + " in: " + text);
    }
    first = false;
    skip();
    mpq_class coef = sign;
    Mono m(ring->size(), 0);
    bool saw_factor = false;
    bool expect_factor = true;
    while (expect_factor) {
      skip();
      if (k < text.size() &&
          std::isdigit(static_cast<unsigned char>(text[k]))) {
        mpz_class num = parse_int();
        mpz_class den = 1;
        skip();
        if (k < text.size() && text[k] == '/') {
          ++k;
          den = parse_int();
        }
        mpq_class c(num, den);
        c.canonicalize();
        coef *= c;
        saw_factor = true;
      } else if (k < text.size() &&
                 std::isalpha(static_cast<unsigned char>(text[k]))) {
        size_t start = k;
        while (k < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[k])) ||
                text[k] == '_'))
          ++k;
        std::string name = text.substr(start, k - start);
        int v = ring->var(name);
        int e = 1;
        skip();
        if (k < text.size() && text[k] == '^') {
          ++k;
          e = static_cast<int>(parse_int().get_si());
        }
        m[v] += e;
        saw_factor = true;
      } else {
        throw make_error("ParseError", "expected coefficient or variable at "
                                           "offset " +
                                           std::to_string(k) + " in: " + text);
      }
      skip();
      if (k < text.size() && text[k] == '*') {
        ++k;
      } else {
        expect_factor = false;
      }
    }
    if (!saw_factor)
      throw make_error("ParseError", "empty term in: " + text);
    out.add_term(m, coef);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ideal presentations: a generator list plus a note on how it was obtained.
// ---------------------------------------------------------------------------
struct IdealPresentation {
  RingPtr ring;
  std::vector<Poly> gens;
  std::string provenance;  // "elimination", "markov", "composition", ...
};

// Canonical form of a generator list: normalized polynomials, sorted by
// (lead degree, lead monomial, term sequence), duplicates and zeros removed.
inline void normalize_generators(std::vector<Poly>& gens,
                                 const MonoOrder& ord) {
  std::vector<Poly> keep;
  for (Poly& g : gens) {
    if (g.is_zero()) continue;
    g.normalize(ord);
    keep.push_back(std::move(g));
  }
  std::sort(keep.begin(), keep.end(), [&](const Poly& a, const Poly& b) {
    auto la = a.lead(ord), lb = b.lead(ord);
    int da = total_degree(la.first), db = total_degree(lb.first);
    if (da != db) return da < db;
    int c = ord.cmp(la.first, lb.first);
    if (c != 0) return c < 0;
    return a.terms() < b.terms();
  });
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  gens = std::move(keep);
}

inline std::vector<std::string> presentation_text(
    const IdealPresentation& pres) {
  MonoOrder ord = degrevlex(*pres.ring);
  std::vector<std::string> out;
  for (const Poly& g : pres.gens) out.push_back(poly_text(g, ord));
  return out;
}

}  // namespace trektoric

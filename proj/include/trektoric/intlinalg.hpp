#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "trektoric/budget.hpp"

namespace trektoric {

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<std::vector<mpz_class>> a;  // row major

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(r, std::vector<mpz_class>(c, 0)) {}

  mpz_class& at(int r, int c) { return a[r][c]; }
  const mpz_class& at(int r, int c) const { return a[r][c]; }

  // Matrix-vector product over the integers.
  std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const {
    std::vector<mpz_class> out(rows, 0);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (a[r][c] != 0 && v[c] != 0) out[r] += a[r][c] * v[c];
    return out;
  }
  std::vector<mpz_class> apply_int(const std::vector<int>& v) const {
    std::vector<mpz_class> w(v.begin(), v.end());
    return apply(w);
  }
};

namespace detail {

// Integer row echelon via Euclidean elimination.  Works on `b` in place,
// returns the rank (number of pivot rows); processes the first `lead_cols`
// columns only, so appended columns ride along untouched by pivot search.
inline int integer_echelon(std::vector<std::vector<mpz_class>>& b,
                           int lead_cols) {
  int rows = static_cast<int>(b.size());
  int pivot_row = 0;
  for (int col = 0; col < lead_cols && pivot_row < rows; ++col) {
    // Repeatedly reduce entries in this column below pivot_row via gcd steps.
    while (true) {
      int best = -1;
      for (int r = pivot_row; r < rows; ++r) {
        if (b[r][col] == 0) continue;
        if (best == -1 || cmp(abs(b[r][col]), abs(b[best][col])) < 0) best = r;
      }
      if (best == -1) break;
      std::swap(b[pivot_row], b[best]);
      bool any_left = false;
      for (int r = pivot_row + 1; r < rows; ++r) {
        if (b[r][col] == 0) continue;
        mpz_class q = b[r][col] / b[pivot_row][col];  // truncated division
        if (q != 0)
          for (size_t k = col; k < b[r].size(); ++k)
            b[r][k] -= q * b[pivot_row][k];
        if (b[r][col] != 0) any_left = true;
      }
      if (!any_left) break;
    }
    if (b[pivot_row][col] != 0) {
      if (b[pivot_row][col] < 0)
        for (auto& x : b[pivot_row]) x = -x;
      ++pivot_row;
    }
  }
  return pivot_row;
}

}  // namespace detail

inline int exact_rank(const IntMatrix& m) {
  auto work = m.a;
  return detail::integer_echelon(work, m.cols);
}

// A lattice basis of the integer kernel {u : M u = 0}.  Row-reduces the
// augmented matrix [M^T | I]; rows whose M^T part vanishes carry a kernel
// basis in their identity part.  Each vector is normalized so its first
// nonzero entry is positive, and the basis is sorted for determinism.
inline std::vector<std::vector<mpz_class>> lattice_kernel(const IntMatrix& m) {
  int r = m.rows, c = m.cols;
  std::vector<std::vector<mpz_class>> b(c, std::vector<mpz_class>(r + c, 0));
  for (int col = 0; col < c; ++col) {
    for (int row = 0; row < r; ++row) b[col][row] = m.a[row][col];
    b[col][r + col] = 1;
  }
  int rank = detail::integer_echelon(b, r);
  std::vector<std::vector<mpz_class>> kernel;
  for (int row = rank; row < c; ++row) {
    std::vector<mpz_class> v(b[row].begin() + r, b[row].end());
    for (const mpz_class& x : v) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
    kernel.push_back(std::move(v));
  }
  std::sort(kernel.begin(), kernel.end(),
            [](const std::vector<mpz_class>& x,
               const std::vector<mpz_class>& y) {
              for (size_t k = 0; k < x.size(); ++k)
                if (x[k] != y[k]) return cmp(x[k], y[k]) < 0;
              return false;
            });
  return kernel;
}

// Rank over the field F_p, used as an independent check of exact_rank.
inline int rank_mod_p(const IntMatrix& m, long p = 1000003) {
  std::vector<std::vector<long>> b(m.rows, std::vector<long>(m.cols));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      mpz_class v = m.a[r][c] % p;
      long x = v.get_si();
      b[r][c] = (x % p + p) % p;
    }
  auto inv = [&](long x) {
    long res = 1, e = p - 2, base = x % p;
    while (e) {
      if (e & 1) res = (__int128)res * base % p;
      base = (__int128)base * base % p;
      e >>= 1;
    }
    return res;
  };
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int piv = -1;
    for (int r = rank; r < m.rows; ++r)
      if (b[r][col]) {
        piv = r;
        break;
      }
    if (piv == -1) continue;
    std::swap(b[rank], b[piv]);
    long s = inv(b[rank][col]);
    for (int c2 = col; c2 < m.cols; ++c2)
      b[rank][c2] = (__int128)b[rank][c2] * s % p;
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || !b[r][col]) continue;
      long f = b[r][col];
      for (int c2 = col; c2 < m.cols; ++c2) {
        b[r][c2] = (b[r][c2] - (__int128)f * b[rank][c2]) % p;
        if (b[r][c2] < 0) b[r][c2] += p;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace trektoric

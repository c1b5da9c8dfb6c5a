#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls the library code it is used to check.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// p-adic valuation by repeated division.
inline long valuation(const mpq_class& q, long p) {
  mpz_class n = q.get_num(), d = q.get_den();
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

// Standard Cartan matrix read off the Dynkin diagram (Bourbaki numbering),
// with C_ij = <alpha_i, alpha_j^vee>: across a multiple bond the long root i
// and the short root j give C_ij = -2 (or -3) and C_ji = -1.
inline std::vector<std::vector<int>> cartan(char family, int n) {
  std::vector<std::vector<int>> c(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  auto bond = [&](int i, int j) {
    c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -1;
    c[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -1;
  };
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 2;
  auto at = [&](int i, int j) -> int& { return c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  switch (family) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) bond(i, i + 1);
      break;
    case 'B':  // alpha_n short
      for (int i = 0; i + 1 < n; ++i) bond(i, i + 1);
      at(n - 2, n - 1) = -2;
      break;
    case 'C':  // alpha_n long
      for (int i = 0; i + 1 < n; ++i) bond(i, i + 1);
      at(n - 1, n - 2) = -2;
      break;
    case 'D':
      for (int i = 0; i + 2 < n; ++i) bond(i, i + 1);
      bond(n - 3, n - 1);
      break;
    case 'E':  // 1-3-4-5-..., 2 attached to 4
      bond(0, 2);
      bond(1, 3);
      for (int i = 2; i + 1 < n; ++i) bond(i, i + 1);
      break;
    case 'F':  // alpha_1, alpha_2 long
      bond(0, 1);
      bond(1, 2);
      bond(2, 3);
      at(1, 2) = -2;
      break;
    case 'G':  // alpha_1 short
      bond(0, 1);
      at(1, 0) = -3;
      break;
  }
  return c;
}

// Rational inverse of a small integer matrix by Gauss-Jordan elimination.
inline std::vector<std::vector<mpq_class>> inverse(const std::vector<std::vector<int>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    const mpq_class lead = a[col][col];
    for (auto& x : a[col]) x /= lead;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return inv;
}

// Integer matrices in SL2(Z) with entries in [-n, n], as (a, b, c, d).
inline std::set<std::vector<long>> sl2z(long n) {
  std::set<std::vector<long>> out;
  for (long a = -n; a <= n; ++a)
    for (long b = -n; b <= n; ++b)
      for (long c = -n; c <= n; ++c)
        for (long d = -n; d <= n; ++d)
          if (a * d - b * c == 1) out.insert({a, b, c, d});
  return out;
}

// Number of classes of x mod p^{-j} Z_p among points of Z[1/p]: the
// components of the Vietoris-Rips graph at scale p^j for the p-adic metric.
inline std::size_t ultrametric_balls(const std::vector<mpq_class>& xs, long p, long j) {
  std::set<mpq_class> keys;
  mpq_class scale = 1;
  for (long i = 0; i < std::labs(j); ++i) scale *= p;
  if (j < 0) scale = 1 / scale;
  for (const auto& x : xs) {
    mpq_class y = x * scale;  // class of y mod Z_p is its ordinary fractional part
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    keys.insert(y - mpq_class(fl));
  }
  return keys.size();
}

// Z[1/p] model set by definition: m/p^k in lowest terms, |m| <= n, k <= n, |x| <= c.
inline std::vector<mpq_class> z_one_over_p_model_set(long p, long n, long c) {
  std::set<mpq_class> out;
  for (long k = 0; k <= n; ++k) {
    mpz_class pk = 1;
    for (long i = 0; i < k; ++i) pk *= p;
    for (long m = -n; m <= n; ++m) {
      mpq_class x(m, pk);
      x.canonicalize();
      if (x.get_den() != pk) continue;  // not in lowest terms
      if (abs(x) <= c) out.insert(x);
    }
  }
  return {out.begin(), out.end()};
}

// Shortest weighted path in (Q, +) by exhaustive enumeration of paths with
// total cost <= budget; steps are (generator, cost).
inline std::optional<long> exhaustive_path(const std::vector<std::pair<mpq_class, long>>& steps, const mpq_class& target,
                                           long budget) {
  std::optional<long> best;
  std::vector<std::pair<mpq_class, long>> frontier{{mpq_class(0), 0}};
  while (!frontier.empty()) {
    std::vector<std::pair<mpq_class, long>> next;
    for (const auto& [x, cost] : frontier) {
      if (x == target && (!best || cost < *best)) best = cost;
      for (const auto& [g, c] : steps)
        if (cost + c <= budget) next.push_back({x + g, cost + c});
    }
    frontier = std::move(next);
  }
  return best;
}

// Connected components of a graph on n vertices by breadth-first search.
inline std::size_t bfs_components(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (auto w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          q.push(w);
        }
    }
  }
  return count;
}

// Tree vertex (m, a) as the p-adic ball a + p^m Z_p. Two balls sit below the
// smallest ball containing both, of radius exponent M, so the path between
// them has (m1 - M) + (m2 - M) edges.
inline long ball_join(long m1, const mpq_class& a1, long m2, const mpq_class& a2, long p) {
  long M = std::min(m1, m2);
  if (a1 != a2) M = std::min(M, valuation(a1 - a2, p));
  return M;
}

inline long ball_distance(long m1, const mpq_class& a1, long m2, const mpq_class& a2, long p) {
  const long M = ball_join(m1, a1, m2, a2, p);
  return (m1 - M) + (m2 - M);
}

// Limit of T - d(rho(T), x) along the balls shrinking to xi (or growing, for
// the end at infinity, where the value is -m).
inline long busemann_limit(long m, const mpq_class& a, const std::optional<mpq_class>& xi, long p) {
  if (!xi) return -m;
  const long e = *xi == 0 ? 0 : std::max(0L, -valuation(*xi, p));
  long M = m;
  if (*xi != a) M = std::min(M, valuation(*xi - a, p));
  return 2 * e + 2 * M - m;
}

}  // namespace oracle

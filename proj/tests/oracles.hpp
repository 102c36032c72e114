#pragma once
// Independent brute-force references used only by tests.

#include <algorithm>
#include <random>
#include <vector>

#include "deepho/exact_linear.hpp"

namespace oracle {

using deepho::Integer;
using Dense = std::vector<std::vector<Integer>>;

inline Integer det(Dense a) {
  // Bareiss fraction-free elimination
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline void subsets(int n, int k, std::vector<std::vector<int>>& out, std::vector<int>& cur, int start = 0) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

/// gcd of all k x k minors (0 if all vanish).
inline Integer determinantalDivisor(const Dense& a, int cols, int k) {
  const int m = static_cast<int>(a.size());
  std::vector<std::vector<int>> rs, cs;
  std::vector<int> cur;
  subsets(m, k, rs, cur);
  subsets(cols, k, cs, cur);
  Integer g = 0;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      Dense sub(k, std::vector<Integer>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub[i][j] = a[r[i]][c[j]];
      Integer d = det(sub);
      if (d < 0) d = -d;
      g = boost::multiprecision::gcd(g, d);
      if (g == 1) return g;
    }
  return g;
}

inline int rankOf(const Dense& a, int cols) {
  const int m = static_cast<int>(a.size());
  for (int k = std::min(m, cols); k >= 1; --k)
    if (determinantalDivisor(a, cols, k) != 0) return k;
  return 0;
}

/// Invariant factors d_k / d_{k-1} from determinantal divisors.
inline std::vector<Integer> invariantFactors(const Dense& a, int cols) {
  const int r = rankOf(a, cols);
  std::vector<Integer> out;
  Integer prev = 1;
  for (int k = 1; k <= r; ++k) {
    Integer d = determinantalDivisor(a, cols, k);
    out.push_back(d / prev);
    prev = d;
  }
  return out;
}

/// Integer solvability of A x = b: equal rank and equal top determinantal divisor.
inline bool solvable(const Dense& a, int cols, const std::vector<Integer>& b) {
  Dense ab = a;
  for (std::size_t i = 0; i < ab.size(); ++i) ab[i].push_back(b[i]);
  int r = rankOf(a, cols);
  if (rankOf(ab, cols + 1) != r) return false;
  if (r == 0) return true;
  return determinantalDivisor(a, cols, r) == determinantalDivisor(ab, cols + 1, r);
}

inline Dense randomDense(std::mt19937_64& rng, int m, int n, int lo, int hi, double zeroProb = 0.0) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dense a(m, std::vector<Integer>(n));
  for (auto& row : a)
    for (auto& x : row) x = u(rng) < zeroProb ? 0 : d(rng);
  return a;
}

}  // namespace oracle

// Reference computations written independently of the library: plain
// adjacency matrices, brute-force enumeration and textbook formulas.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline int Popcount(std::uint32_t x) {
  int c = 0;
  for (; x; x &= x - 1) ++c;
  return c;
}

inline bool CubeAdjacent(std::uint32_t u, std::uint32_t v) {
  return Popcount(u ^ v) == 1;
}

// Adjacency matrix from an explicit edge list.
inline Matrix Adjacency(int n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  const std::size_t N = std::size_t{1} << n;
  Matrix a(N, std::vector<double>(N, 0.0));
  for (auto [u, v] : edges) {
    a[u][v] = 1.0;
    a[v][u] = 1.0;
  }
  return a;
}

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> AllCubeEdges(int n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  const std::uint32_t N = 1u << n;
  for (std::uint32_t u = 0; u < N; ++u) {
    for (std::uint32_t v = u + 1; v < N; ++v) {
      if (CubeAdjacent(u, v)) e.emplace_back(u, v);
    }
  }
  return e;
}

inline std::vector<double> Multiply(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

// Largest eigenvalue of a non-negative symmetric matrix by shifted power
// iteration on A + I (the shift removes the -lambda tie of bipartite graphs).
inline double PowerLargest(const Matrix& a, int iterations = 20000) {
  const std::size_t N = a.size();
  if (N == 0) return 0.0;
  std::vector<double> x(N, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> y = Multiply(a, x);
    for (std::size_t i = 0; i < N; ++i) y[i] += x[i];
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& v : y) v /= norm;
    const std::vector<double> ay = Multiply(a, y);
    double num = 0.0;
    for (std::size_t i = 0; i < N; ++i) num += y[i] * ay[i];
    const double prev = lambda;
    lambda = num;
    x = std::move(y);
    if (it > 50 && std::abs(lambda - prev) < 1e-15) break;
  }
  return lambda;
}

// Number of walks of length 2 from v, counted by enumerating (v, u, w).
inline std::uint64_t Walk2Brute(const Matrix& a, std::size_t v) {
  std::uint64_t walks = 0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (a[v][u] == 0.0) continue;
    for (std::size_t w = 0; w < a.size(); ++w) {
      if (a[u][w] != 0.0) ++walks;
    }
  }
  return walks;
}

inline double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// E[#vertices with degree >= k] = 2^n * sum_{l>=k} C(n,l) p^l (1-p)^(n-l).
inline double ExpectedAtLeast(int n, double p, int k) {
  double tail = 0.0;
  for (int l = std::max(k, 0); l <= n; ++l) {
    tail += Binomial(n, l) * std::pow(p, l) * std::pow(1.0 - p, n - l);
  }
  return std::ldexp(tail, n);
}

// Largest k with 2^n C(n,k) p^k (1-p)^(n-k) >= 1, or -1.
inline int KappaScan(int n, double p) {
  for (int k = n; k >= 0; --k) {
    if (std::ldexp(Binomial(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k), n) >= 1.0) {
      return k;
    }
  }
  return -1;
}

// Components by repeated flood fill over the adjacency matrix; returns the
// edge count of each component.
inline std::vector<std::uint64_t> ComponentEdgeCounts(const Matrix& a) {
  const std::size_t N = a.size();
  std::vector<int> label(N, -1);
  int next = 0;
  for (std::size_t s = 0; s < N; ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < N; ++w) {
        if (a[v][w] != 0.0 && label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  std::vector<std::uint64_t> edges(static_cast<std::size_t>(next), 0);
  for (std::size_t v = 0; v < N; ++v) {
    for (std::size_t w = v + 1; w < N; ++w) {
      if (a[v][w] != 0.0) ++edges[static_cast<std::size_t>(label[v])];
    }
  }
  return edges;
}

}  // namespace oracle

#include "cubespec/locality.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cubespec/error.hpp"
#include "cubespec/rng.hpp"

namespace cubespec {
namespace {

int CountNear(std::span<const std::uint8_t> degree, int n, Vertex v,
              int threshold) {
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const Vertex u = v ^ (Vertex{1} << i);
    count += degree[u] >= threshold;
    for (int j = i + 1; j < n; ++j) {
      count += degree[u ^ (Vertex{1} << j)] >= threshold;
    }
  }
  return count;
}

LocalityReport Scan(const HypercubeSubgraph& g, int threshold,
                    const ScanOptions& scan) {
  const int n = g.dimension();
  std::vector<std::uint8_t> degree(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    degree[v] = static_cast<std::uint8_t>(g.degree_unchecked(v));
  }
  LocalityReport r;
  r.threshold = threshold;
  r.max_cluster = -1;
  auto visit = [&](Vertex v) {
    const int c = CountNear(degree, n, v, threshold);
    if (c > r.max_cluster) {
      r.max_cluster = c;
      r.argmax_vertex = v;
    }
  };
  if (scan.sample_size) {
    r.sampled = true;
    SplitMix64 rng(scan.sample_seed);
    const std::uint64_t mask = g.vertex_count() - 1;
    for (std::uint64_t s = 0; s < *scan.sample_size; ++s) {
      visit(static_cast<Vertex>(rng() & mask));
    }
    if (r.max_cluster < 0) r.max_cluster = 0;
  } else {
    for (Vertex v = 0; v < g.vertex_count(); ++v) visit(v);
  }
  return r;
}

}  // namespace

int HighDegreeNear(const HypercubeSubgraph& g, Vertex v, int threshold) {
  if (v >= g.vertex_count()) Fail(ErrorCode::kOutOfRange, "vertex out of range");
  int count = 0;
  const int n = g.dimension();
  for (int i = 0; i < n; ++i) {
    const Vertex u = v ^ (Vertex{1} << i);
    count += g.degree_unchecked(u) >= threshold;
    for (int j = i + 1; j < n; ++j) {
      count += g.degree_unchecked(u ^ (Vertex{1} << j)) >= threshold;
    }
  }
  return count;
}

int CeilThreshold(double x) {
  return static_cast<int>(std::ceil(x - 1e-9));
}

LocalityReport HighDegreeClusterStat(const HypercubeSubgraph& g, double p,
                                     double a, double b,
                                     const ScanOptions& scan) {
  if (!(a > 0.0 && b > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "exponents a and b must be positive");
  }
  const double n = g.dimension();
  const double nb = std::pow(n, b);
  LocalityReport r = Scan(g, CeilThreshold(nb), scan);
  r.cluster_limit = std::pow(n, a);
  r.conclusion_holds = r.max_cluster < r.cluster_limit;
  r.hypothesis_sum = a + b > 1.0;
  r.hypothesis_threshold = nb >= 6.0 * n * p;
  return r;
}

LocalityReport AboveMeanClusterStat(const HypercubeSubgraph& g, double p,
                                    double a, const ScanOptions& scan) {
  if (!(p > 0.0 && p <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "p must lie in (0, 1]");
  }
  if (!(a > 0.0)) Fail(ErrorCode::kInvalidArgument, "a must be positive");
  if (g.dimension() < 2) {
    Fail(ErrorCode::kInvalidArgument, "threshold needs n >= 2 (ln n > 0)");
  }
  const double n = g.dimension();
  const double np = n * p;
  LocalityReport r = Scan(g, CeilThreshold(np + np / std::log(n)), scan);
  r.cluster_limit = std::pow(n, a) / p;
  r.conclusion_holds = r.max_cluster < r.cluster_limit;
  r.hypothesis_density = p >= std::pow(n, -2.0 / 3.0);
  return r;
}

}  // namespace cubespec

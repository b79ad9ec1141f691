#pragma once

#include <cstdint>
#include <optional>

#include "cubespec/cube_graph.hpp"

namespace cubespec {

// Distances below are bit-flip distances in the full cube, not path lengths
// in the subgraph.

// Number of u != v at cube distance 1 or 2 from v with degree(u) >= threshold.
int HighDegreeNear(const HypercubeSubgraph& g, Vertex v, int threshold);

inline int BallSize(int n) { return n + n * (n - 1) / 2; }

struct ScanOptions {
  // When set, scan this many uniformly drawn centres instead of all 2^n.
  std::optional<std::uint64_t> sample_size;
  std::uint64_t sample_seed = 0;
};

struct LocalityReport {
  int threshold = 0;
  int max_cluster = 0;
  Vertex argmax_vertex = 0;
  double cluster_limit = 0.0;  // n^a or n^a / p
  bool conclusion_holds = false;  // max_cluster < cluster_limit
  bool sampled = false;
  // Hypotheses of the lemma being measured; reported, never enforced.
  bool hypothesis_sum = false;       // (i): a + b > 1
  bool hypothesis_threshold = false; // (i): n^b >= 6 n p
  bool hypothesis_density = false;   // (ii): p >= n^(-2/3)
};

// ceil(x) tolerant of pow() landing a hair above an integer.
int CeilThreshold(double x);

// threshold = ceil(n^b), limit n^a.
LocalityReport HighDegreeClusterStat(const HypercubeSubgraph& g, double p,
                                     double a, double b,
                                     const ScanOptions& scan = {});

// threshold = ceil(n p + n p / ln n), limit n^a / p.
LocalityReport AboveMeanClusterStat(const HypercubeSubgraph& g, double p,
                                    double a, const ScanOptions& scan = {});

}  // namespace cubespec

#pragma once

#include <cstdint>
#include <functional>

#include "cubespec/cube_graph.hpp"

namespace cubespec {

// Eigenvalue bounds for one graph. Every quantity is derived from integer
// degree data; conversion to double happens last.
struct BoundReport {
  int max_degree = 0;
  std::uint64_t edges = 0;
  std::uint64_t walk2_max = 0;
  double sqrt_max_degree = 0.0;
  double avg_degree = 0.0;       // 2m / 2^n
  double max_degree_bound = 0.0; // Delta
  double sqrt_edges = 0.0;
  double walk2_bound = 0.0;      // sqrt(max_v W2(G, v))
  double parity_product_bound = 0.0;
  double prediction = 0.0;       // max(sqrt(Delta), n p)
};

struct Sandwich {
  double lower = 0.0;
  double upper = 0.0;
};

// lower = max(sqrt(Delta), 2m / 2^n), upper = Delta.
Sandwich SandwichBounds(const HypercubeSubgraph& g);

// W2(G, v) = sum of degrees of v's neighbours.
std::uint64_t Walk2(const HypercubeSubgraph& g, Vertex v);
std::uint64_t Walk2Max(const HypercubeSubgraph& g);

using SidePredicate = std::function<bool(Vertex)>;

// True for odd-weight vertices; every subgraph of the cube is bipartite under
// this coloring.
bool ParitySide(Vertex v) noexcept;

// sqrt(Delta_1 * Delta_2) for max degrees over the two sides of the given
// coloring. Throws kInvalidArgument if an edge lies within one side.
double BipartiteProductBound(const HypercubeSubgraph& g,
                             const SidePredicate& side);

double SqrtEdgesBound(const HypercubeSubgraph& g);

// Common neighbours of u and v in the full cube Q^n: n when u == v, 2 at
// Hamming distance 2, otherwise 0.
int CommonCubeNeighbors(Vertex u, Vertex v, int n);

double TheoremPrediction(int max_degree, int n, double p);

BoundReport ComputeBoundReport(const HypercubeSubgraph& g, double p);

}  // namespace cubespec

#include "cubespec/spectral_bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cubespec/error.hpp"

namespace cubespec {

Sandwich SandwichBounds(const HypercubeSubgraph& g) {
  const int delta = MaxDegree(g);
  // 2m / 2^n with an exact power-of-two divisor.
  const double avg =
      std::ldexp(static_cast<double>(2 * g.edge_count()), -g.dimension());
  return {std::max(std::sqrt(static_cast<double>(delta)), avg),
          static_cast<double>(delta)};
}

std::uint64_t Walk2(const HypercubeSubgraph& g, Vertex v) {
  DirectionMask m = g.mask(v);
  std::uint64_t walks = 0;
  while (m != 0) {
    const int i = std::countr_zero(m);
    walks += g.degree_unchecked(v ^ (Vertex{1} << i));
    m &= m - 1;
  }
  return walks;
}

std::uint64_t Walk2Max(const HypercubeSubgraph& g) {
  std::uint64_t best = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) best = std::max(best, Walk2(g, v));
  return best;
}

bool ParitySide(Vertex v) noexcept { return std::popcount(v) & 1; }

double BipartiteProductBound(const HypercubeSubgraph& g,
                             const SidePredicate& side) {
  int delta_true = 0;
  int delta_false = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const bool s = side(v);
    DirectionMask m = g.mask(v);
    while (m != 0) {
      const Vertex w = v ^ (Vertex{1} << std::countr_zero(m));
      if (side(w) == s) {
        Fail(ErrorCode::kInvalidArgument,
             "edge (" + std::to_string(std::min(v, w)) + ", " +
                 std::to_string(std::max(v, w)) +
                 ") has both endpoints on one side");
      }
      m &= m - 1;
    }
    int& slot = s ? delta_true : delta_false;
    slot = std::max(slot, g.degree_unchecked(v));
  }
  const std::uint64_t product =
      static_cast<std::uint64_t>(delta_true) * delta_false;
  return std::sqrt(static_cast<double>(product));
}

double SqrtEdgesBound(const HypercubeSubgraph& g) {
  return std::sqrt(static_cast<double>(g.edge_count()));
}

int CommonCubeNeighbors(Vertex u, Vertex v, int n) {
  CheckDimension(n);
  const std::uint64_t order = std::uint64_t{1} << n;
  if (u >= order || v >= order) {
    Fail(ErrorCode::kOutOfRange, "vertex out of range");
  }
  switch (std::popcount(u ^ v)) {
    case 0:
      return n;
    case 2:
      return 2;
    default:
      return 0;
  }
}

double TheoremPrediction(int max_degree, int n, double p) {
  if (max_degree < 0) {
    Fail(ErrorCode::kInvalidArgument, "maximum degree must be non-negative");
  }
  return std::max(std::sqrt(static_cast<double>(max_degree)), n * p);
}

BoundReport ComputeBoundReport(const HypercubeSubgraph& g, double p) {
  BoundReport r;
  r.max_degree = MaxDegree(g);
  r.edges = g.edge_count();
  r.walk2_max = Walk2Max(g);
  r.sqrt_max_degree = std::sqrt(static_cast<double>(r.max_degree));
  r.avg_degree = std::ldexp(static_cast<double>(2 * r.edges), -g.dimension());
  r.max_degree_bound = static_cast<double>(r.max_degree);
  r.sqrt_edges = std::sqrt(static_cast<double>(r.edges));
  r.walk2_bound = std::sqrt(static_cast<double>(r.walk2_max));
  r.parity_product_bound = BipartiteProductBound(g, ParitySide);
  r.prediction = TheoremPrediction(r.max_degree, g.dimension(), p);
  return r;
}

}  // namespace cubespec

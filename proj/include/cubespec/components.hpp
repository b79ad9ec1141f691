#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cubespec/cube_graph.hpp"
#include "cubespec/eigensolve.hpp"

namespace cubespec {

// Connected components of a cube subgraph, ordered by smallest vertex.
// Members of component c are vertices[offsets[c] .. offsets[c + 1]), sorted.
struct ComponentCensus {
  std::vector<Vertex> vertices;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint64_t> edges;
  std::map<std::uint64_t, std::uint64_t> yk;  // edge count -> components
  std::uint64_t largest_component_edges = 0;

  std::size_t size() const noexcept { return edges.size(); }
  std::span<const Vertex> members(std::size_t c) const {
    return std::span<const Vertex>(vertices).subspan(
        offsets[c], offsets[c + 1] - offsets[c]);
  }
};

// Breadth-first traversal with an explicit queue and a visited bitmap.
ComponentCensus ConnectedComponents(const HypercubeSubgraph& g);

// Components with at most this many vertices are solved densely.
inline constexpr std::size_t kDenseComponentLimit = 64;

double ComponentLambda1(const HypercubeSubgraph& g,
                        std::span<const Vertex> members, std::uint64_t edges,
                        const SolverConfig& config = {});

std::vector<double> PerComponentLambda1(const HypercubeSubgraph& g,
                                        const ComponentCensus& census,
                                        const SolverConfig& config = {});

// Majorant 2^n k! n^k p^k on E[Y_k], the expected number of components with
// exactly k edges. The constant in front is taken to be 1.
double ExpectedYkUpper(int n, double p, int k);

// One vertex of degree k and every other of degree 1. The isolated vertex
// counts as the star with zero edges.
bool IsStar(const HypercubeSubgraph& g, std::span<const Vertex> members,
            std::uint64_t edges);

struct Case4ShapeReport {
  double lambda1 = 0.0;
  int max_degree = 0;
  bool lambda_sq_matches = false;  // lambda1^2 in {Delta, Delta + 1}
  std::uint64_t largest_component_edges = 0;
  std::size_t achieving_component = 0;
  bool achieving_is_star = false;
};

inline constexpr double kCase4ShapeTolerance = 1e-6;

Case4ShapeReport Case4ShapeCheck(const HypercubeSubgraph& g,
                                 const ComponentCensus& census, double lambda1,
                                 const SolverConfig& config = {});
// Same, reusing per-component values from PerComponentLambda1.
Case4ShapeReport Case4ShapeCheck(const HypercubeSubgraph& g,
                                 const ComponentCensus& census, double lambda1,
                                 std::span<const double> lambdas);

struct ComponentsSummary {
  ComponentCensus census;
  std::vector<double> lambdas;
  double star_fraction = 0.0;  // stars among components with >= 1 edge
  std::optional<double> k0;    // kappa + kappa / ln kappa, reporting only
  Case4ShapeReport case4;
};

ComponentsSummary SummarizeComponents(const HypercubeSubgraph& g, double p,
                                      double lambda1,
                                      const SolverConfig& config = {});

}  // namespace cubespec

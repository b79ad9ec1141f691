#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cubespec/cube_graph.hpp"

namespace cubespec {

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 500;  // cap on operator applications
  std::uint64_t start_seed = 0x5eed;
  bool reorthogonalize = true;
  // Basis vectors kept in memory; the solver thick-restarts when full.
  int max_basis = 32;
  bool want_vector = false;
};

struct SpectralResult {
  double lambda1 = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::optional<std::vector<double>> vector;
};

// y = A x for a real symmetric operator of the given dimension.
struct SymmetricOperator {
  std::size_t dimension = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
};

// y[v] = sum over present directions i, ascending, of x[v ^ 2^i].
void Matvec(const HypercubeSubgraph& g, std::span<const double> x,
            std::span<double> y);
std::vector<double> Matvec(const HypercubeSubgraph& g,
                           std::span<const double> x);

// Largest algebraic eigenvalue by Lanczos with Rayleigh-Ritz extraction on the
// projected matrix. Bipartite operators have a +-lambda pairing, which the
// Ritz extraction resolves where plain power iteration would oscillate.
SpectralResult LanczosLargest(const SymmetricOperator& op,
                              const SolverConfig& config);

SpectralResult LanczosLambda1(const HypercubeSubgraph& g,
                              const SolverConfig& config = {});

// ||A x - lambda x||_2, recomputed from scratch.
double ResidualNorm(const SymmetricOperator& op, std::span<const double> x,
                    double lambda);
double ResidualNorm(const HypercubeSubgraph& g, std::span<const double> x,
                    double lambda);

// Dense symmetric matrix in row-major order.
class DenseSymmetric {
 public:
  explicit DenseSymmetric(std::size_t order)
      : order_(order), data_(order * order, 0.0) {}

  std::size_t order() const noexcept { return order_; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * order_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * order_ + j];
  }

 private:
  std::size_t order_;
  std::vector<double> data_;
};

struct JacobiResult {
  std::vector<double> eigenvalues;  // non-increasing
  // Column k (row-major, order x order) is the unit eigenvector of
  // eigenvalues[k]; empty unless requested.
  std::vector<double> eigenvectors;
  int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
// off_tol * max(1, ||A||_F).
JacobiResult JacobiEigen(DenseSymmetric a, bool want_vectors,
                         double off_tol = 1e-12);

inline constexpr int kMaxDenseDimension = 10;

DenseSymmetric AdjacencyMatrix(const HypercubeSubgraph& g);

// Full adjacency spectrum in non-increasing order; n <= 10.
std::vector<double> DenseSpectrum(const HypercubeSubgraph& g);

}  // namespace cubespec

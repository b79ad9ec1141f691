#include "cubespec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cubespec/error.hpp"
#include "cubespec/rng.hpp"

namespace cubespec {
namespace {

// Four interleaved partial sums, combined in a fixed order.
double Dot(std::span<const double> a, std::span<const double> b) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < a.size(); ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void Scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

void CheckConfig(const SolverConfig& config) {
  if (!(config.tol > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "solver tolerance must be positive");
  }
  if (config.max_iter < 1) {
    Fail(ErrorCode::kInvalidArgument, "max_iter must be at least 1");
  }
  if (config.max_basis < 3) {
    Fail(ErrorCode::kInvalidArgument, "max_basis must be at least 3");
  }
}

// Orients an eigenvector so that its entries sum to a non-negative value;
// for a Perron vector this makes every entry non-negative.
void Orient(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  if (s < 0.0) Scale(-1.0, x);
}

// x = sum_k coeffs[k] * basis[k]
std::vector<double> Combine(const std::vector<std::vector<double>>& basis,
                            std::span<const double> coeffs, std::size_t dim) {
  std::vector<double> x(dim, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) Axpy(coeffs[k], basis[k], x);
  return x;
}

constexpr std::size_t kBlock = 2048;

// One classical Gram-Schmidt pass against basis[0..count): h = B^T w, then
// w -= B h. Works block by block so w stays in cache while the basis streams.
void ProjectOut(const std::vector<std::vector<double>>& basis, std::size_t count,
                std::span<double> w, std::span<double> h) {
  const std::size_t dim = w.size();
  std::fill(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(count), 0.0);
  for (std::size_t lo = 0; lo < dim; lo += kBlock) {
    const std::size_t len = std::min(kBlock, dim - lo);
    const auto wb = w.subspan(lo, len);
    for (std::size_t i = 0; i < count; ++i) {
      h[i] += Dot(std::span<const double>(basis[i]).subspan(lo, len), wb);
    }
  }
  for (std::size_t lo = 0; lo < dim; lo += kBlock) {
    const std::size_t len = std::min(kBlock, dim - lo);
    for (std::size_t i = 0; i < count; ++i) {
      Axpy(-h[i], std::span<const double>(basis[i]).subspan(lo, len), w.subspan(lo, len));
    }
  }
}

}  // namespace

void Matvec(const HypercubeSubgraph& g, std::span<const double> x,
            std::span<double> y) {
  if (x.size() != g.vertex_count() || y.size() != g.vertex_count()) {
    Fail(ErrorCode::kInvalidArgument, "matvec length mismatch");
  }
  const std::span<const DirectionMask> masks = g.masks();
  for (std::size_t v = 0; v < masks.size(); ++v) {
    DirectionMask m = masks[v];
    double acc = 0.0;
    while (m != 0) {
      const int i = std::countr_zero(m);
      acc += x[v ^ (std::size_t{1} << i)];
      m &= m - 1;
    }
    y[v] = acc;
  }
}

std::vector<double> Matvec(const HypercubeSubgraph& g,
                           std::span<const double> x) {
  std::vector<double> y(g.vertex_count());
  Matvec(g, x, y);
  return y;
}

double ResidualNorm(const SymmetricOperator& op, std::span<const double> x,
                    double lambda) {
  std::vector<double> y(op.dimension);
  op.apply(x, y);
  Axpy(-lambda, x, y);
  return Norm(y);
}

double ResidualNorm(const HypercubeSubgraph& g, std::span<const double> x,
                    double lambda) {
  std::vector<double> y = Matvec(g, x);
  Axpy(-lambda, x, y);
  return Norm(y);
}

SpectralResult LanczosLargest(const SymmetricOperator& op,
                              const SolverConfig& config) {
  CheckConfig(config);
  const std::size_t dim = op.dimension;
  SpectralResult result;
  if (dim == 0) {
    result.converged = true;
    return result;
  }

  const std::size_t capacity =
      std::min<std::size_t>(static_cast<std::size_t>(config.max_basis), dim);
  const std::size_t keep = std::max<std::size_t>(1, capacity / 4);

  std::vector<std::vector<double>> basis;
  basis.reserve(capacity);
  {
    // Non-negative start: the Perron vector is non-negative, so this never
    // starts orthogonal to it.
    SplitMix64 rng(config.start_seed);
    std::vector<double> start(dim);
    for (double& v : start) v = 1.0 + 0.5 * rng.Uniform();
    Scale(1.0 / Norm(start), start);
    basis.push_back(std::move(start));
  }

  DenseSymmetric projected(capacity);
  std::vector<double> w(dim);
  std::vector<double> coeffs;
  std::vector<double> correction;
  double prev_theta = std::numeric_limits<double>::quiet_NaN();

  auto finish = [&](double theta, std::span<const double> ritz,
                    bool claim) -> SpectralResult {
    std::vector<double> x = Combine(basis, ritz, dim);
    Scale(1.0 / Norm(x), x);
    SpectralResult r;
    r.lambda1 = theta;
    r.iterations = result.iterations;
    r.residual = ResidualNorm(op, x, theta);
    r.converged =
        claim && r.residual <= config.tol * std::max(1.0, std::abs(theta));
    if (config.want_vector) {
      Orient(x);
      r.vector = std::move(x);
    }
    return r;
  };

  while (true) {
    const std::size_t j = basis.size() - 1;
    op.apply(basis[j], w);
    ++result.iterations;

    coeffs.assign(j + 1, 0.0);
    if (config.reorthogonalize) {
      // Local three-term step, then a full classical Gram-Schmidt pass,
      // repeated once when that pass cancels more than 1/sqrt(2) of the norm.
      for (std::size_t i = (j >= 1 ? j - 1 : 0); i <= j; ++i) {
        const double h = Dot(basis[i], w);
        coeffs[i] += h;
        Axpy(-h, basis[i], w);
      }
      correction.assign(j + 1, 0.0);
      const double before = Norm(w);
      ProjectOut(basis, j + 1, w, correction);
      for (std::size_t i = 0; i <= j; ++i) coeffs[i] += correction[i];
      if (Norm(w) < 0.7071067811865476 * before) {
        correction.assign(j + 1, 0.0);
        ProjectOut(basis, j + 1, w, correction);
        for (std::size_t i = 0; i <= j; ++i) coeffs[i] += correction[i];
      }
    } else {
      for (std::size_t i = (j >= 1 ? j - 1 : 0); i <= j; ++i) {
        const double h = Dot(basis[i], w);
        coeffs[i] = h;
        Axpy(-h, basis[i], w);
      }
    }
    for (std::size_t i = 0; i <= j; ++i) {
      projected(i, j) = coeffs[i];
      projected(j, i) = coeffs[i];
    }
    const double beta = Norm(w);

    DenseSymmetric sub(j + 1);
    for (std::size_t a = 0; a <= j; ++a) {
      for (std::size_t b = 0; b <= j; ++b) sub(a, b) = projected(a, b);
    }
    const JacobiResult ritz = JacobiEigen(std::move(sub), true, 1e-13);
    const std::size_t order = j + 1;
    const double theta = ritz.eigenvalues.front();
    std::vector<double> top(order);
    for (std::size_t a = 0; a < order; ++a) {
      top[a] = ritz.eigenvectors[a * order];
    }

    double op_norm = 0.0;
    for (double t : ritz.eigenvalues) op_norm = std::max(op_norm, std::abs(t));
    const double scale = std::max(1.0, std::abs(theta));
    const double estimate = beta * std::abs(top.back());
    const bool stagnant = std::abs(theta - prev_theta) < config.tol * scale;
    prev_theta = theta;
    const bool invariant =
        beta <= 1e-12 * std::max(1.0, op_norm) || order == dim;

    if ((stagnant && estimate <= config.tol * scale) || invariant) {
      SpectralResult r = finish(theta, top, true);
      if (r.converged || invariant) return r;
    }
    if (result.iterations >= config.max_iter) return finish(theta, top, false);

    Scale(1.0 / beta, w);
    if (basis.size() == capacity && !config.reorthogonalize) {
      // Without orthogonality the basis cannot carry a thick restart; start a
      // fresh Krylov sequence from the current Ritz vector instead.
      std::vector<double> x = Combine(basis, top, dim);
      Scale(1.0 / Norm(x), x);
      basis.clear();
      basis.push_back(std::move(x));
      projected = DenseSymmetric(capacity);
      prev_theta = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (basis.size() == capacity) {
      // Thick restart: keep the leading Ritz vectors, then continue the
      // Krylov sequence from the current residual direction.
      std::vector<std::vector<double>> kept(keep, std::vector<double>(dim, 0.0));
      for (std::size_t lo = 0; lo < dim; lo += kBlock) {
        const std::size_t len = std::min(kBlock, dim - lo);
        for (std::size_t k = 0; k < keep; ++k) {
          const std::span<double> out = std::span<double>(kept[k]).subspan(lo, len);
          for (std::size_t a = 0; a < order; ++a) {
            Axpy(ritz.eigenvectors[a * order + k],
                 std::span<const double>(basis[a]).subspan(lo, len), out);
          }
        }
      }
      basis = std::move(kept);
      basis.reserve(capacity);
      projected = DenseSymmetric(capacity);
      for (std::size_t k = 0; k < keep; ++k) {
        projected(k, k) = ritz.eigenvalues[k];
      }
    }
    basis.push_back(w);
  }
}

SpectralResult LanczosLambda1(const HypercubeSubgraph& g,
                              const SolverConfig& config) {
  CheckConfig(config);
  if (g.edge_count() == 0) {
    SpectralResult r;
    r.converged = true;
    if (config.want_vector) {
      std::vector<double> x(g.vertex_count(), 0.0);
      x[0] = 1.0;
      r.vector = std::move(x);
    }
    return r;
  }
  SymmetricOperator op{
      g.vertex_count(),
      [&g](std::span<const double> x, std::span<double> y) { Matvec(g, x, y); }};
  return LanczosLargest(op, config);
}

JacobiResult JacobiEigen(DenseSymmetric a, bool want_vectors, double off_tol) {
  const std::size_t n = a.order();
  JacobiResult out;
  std::vector<double> v;
  if (want_vectors) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }

  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  }
  const double target = off_tol * std::max(1.0, std::sqrt(frob));
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  while (out.sweeps < kMaxSweeps && off_norm() > target) {
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = a(r, p);
          const double h = a(r, q);
          a(r, p) = a(p, r) = c * g - s * h;
          a(r, q) = a(q, r) = s * g + c * h;
        }
        if (want_vectors) {
          for (std::size_t r = 0; r < n; ++r) {
            const double g = v[r * n + p];
            const double h = v[r * n + q];
            v[r * n + p] = c * g - s * h;
            v[r * n + q] = s * g + c * h;
          }
        }
      }
    }
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = a(perm[k], perm[k]);
  if (want_vectors) {
    out.eigenvectors.resize(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        out.eigenvectors[r * n + k] = v[r * n + perm[k]];
      }
    }
  }
  return out;
}

DenseSymmetric AdjacencyMatrix(const HypercubeSubgraph& g) {
  if (g.dimension() > kMaxDenseDimension) {
    Fail(ErrorCode::kOutOfRange, "dense spectrum limited to n <= 10");
  }
  const std::size_t order = g.vertex_count();
  DenseSymmetric a(order);
  for (std::size_t v = 0; v < order; ++v) {
    for (int i = 0; i < g.dimension(); ++i) {
      if (g.has_edge(static_cast<Vertex>(v), i)) {
        a(v, v ^ (std::size_t{1} << i)) = 1.0;
      }
    }
  }
  return a;
}

std::vector<double> DenseSpectrum(const HypercubeSubgraph& g) {
  return JacobiEigen(AdjacencyMatrix(g), false).eigenvalues;
}

}  // namespace cubespec

#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace cubespec {

// Probability regimes of the sparse/dense case analysis, with
// L = exp(-(ln n)^4):
//   case1: L <= p <= n^(-2/3)
//   case2: p >= n^(-4/9)
//   case3: n^(-2/3) <= p <= n^(-4/9)
//   case4: p < L
// Ties at a shared boundary go to the lower-numbered case. Dimension 1 has no
// regime (ln 1 = 0) and reports kNone.
enum class Regime { kNone, kCase1, kCase2, kCase3, kCase4 };

std::string_view RegimeName(Regime r);
std::optional<Regime> ParseRegime(std::string_view name);

Regime ClassifyRegime(int n, double p);

struct DegreeInterval {
  int lo = 0;
  int hi = 0;
  bool Contains(int d) const noexcept { return lo <= d && d <= hi; }
  friend bool operator==(const DegreeInterval&, const DegreeInterval&) = default;
};

enum class DegreeLaw {
  kWindow,       // kappa - 1 .. kappa + 1
  kBand,         // k - 1 .. k, p near 2^(-n/k) / n
  kExact,        // kappa, p exponentially small outside every band
};

std::string_view DegreeLawName(DegreeLaw law);

struct DegreeTheoryOptions {
  // p counts as "proportional to 2^(-n/k)/n" when within this factor of it.
  double band_factor = 2.0;
  // p counts as exponentially small when p <= 2^(-alpha n).
  double exp_small_alpha = 0.5;
};

struct DegreePrediction {
  DegreeInterval range;
  DegreeLaw law = DegreeLaw::kWindow;
  int band_k = 0;  // set for kBand
};

// log of 2^n C(n,k) p^k (1-p)^(n-k); -inf when the term vanishes.
double LogKappaTerm(int n, double p, int k);

// E[X_k] = 2^n sum_{l >= k} C(n,l) p^l (1-p)^(n-l), the expected number of
// vertices with degree at least k. Valid for 0 <= k <= n + 1.
double ExpectedExceedCount(int n, double p, int k);

// Largest k in 0..n with 2^n C(n,k) p^k (1-p)^(n-k) >= 1, or nullopt if none.
std::optional<int> Kappa(int n, double p);

DegreePrediction PredictedMaxDegree(int n, double p,
                                    const DegreeTheoryOptions& options = {});

// Root c in (p, 1) of
//   ln 2 + c ln p + (1-c) ln(1-p) = c ln c + (1-c) ln(1-c),
// for 0 < p < 1/2; returns 1 for p >= 1/2.
double ConstantPCoefficient(double p);
double ConstantPResidual(double p, double c);

// exp(-E[X_k] / 2): upper bound on Pr(Delta < k).
double ProbMaxDegreeLt(int n, double p, int k);
// min(1, E[X_k]): Markov bound on Pr(Delta >= k).
double ProbMaxDegreeGe(int n, double p, int k);

// Upper bound on Pr[Bin(n, p) >= t] of the form
//   exp(-(t - mu)^2 / (2 mu) + (t - mu)^3 / (2 mu^2)),  mu = n p.
// The exponent turns upward past t - mu = 2 mu / 3; since the tail is
// non-increasing in t, the bound at t is the minimum over all s in [mu, t],
// which is the formula evaluated at min(t - mu, 2 mu / 3). Returns 1 for
// t < mu.
double ChernoffDegreeTail(int n, double p, double t);

struct DegreeProfile {
  int n = 0;
  double p = 0.0;
  std::optional<int> kappa;
  Regime regime = Regime::kNone;
  DegreePrediction predicted;
  std::optional<double> c_coefficient;
  std::vector<double> exceed_counts;  // E[X_k] for k = 0 .. n + 1
};

DegreeProfile ComputeDegreeProfile(int n, double p,
                                   const DegreeTheoryOptions& options = {});

}  // namespace cubespec

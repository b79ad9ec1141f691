#include "cubespec/degree_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cubespec/error.hpp"

namespace cubespec {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckProbability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "probability outside [0, 1]");
  }
}

void CheckN(int n) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "n must be positive");
}

double LogFactorial(int k) {
  double s = 0.0;
  for (int i = 2; i <= k; ++i) s += std::log(static_cast<double>(i));
  return s;
}

double LogChoose(int n, int k) {
  return LogFactorial(n) - LogFactorial(k) - LogFactorial(n - k);
}

// log of C(n,l) p^l (1-p)^(n-l) with 0 log 0 = 0.
double LogBinomialPmf(int n, double p, int l) {
  double s = LogChoose(n, l);
  if (l > 0) s += (p == 0.0) ? kNegInf : l * std::log(p);
  if (l < n) s += (p == 1.0) ? kNegInf : (n - l) * std::log1p(-p);
  return s;
}

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// (1 - c) ln(1 - c) and c ln c with the continuous extension at 0.
double XLogX(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

std::string_view RegimeName(Regime r) {
  switch (r) {
    case Regime::kCase1:
      return "case1";
    case Regime::kCase2:
      return "case2";
    case Regime::kCase3:
      return "case3";
    case Regime::kCase4:
      return "case4";
    case Regime::kNone:
      break;
  }
  return "none";
}

std::optional<Regime> ParseRegime(std::string_view name) {
  for (Regime r : {Regime::kNone, Regime::kCase1, Regime::kCase2,
                   Regime::kCase3, Regime::kCase4}) {
    if (RegimeName(r) == name) return r;
  }
  return std::nullopt;
}

Regime ClassifyRegime(int n, double p) {
  CheckN(n);
  CheckProbability(p);
  if (n < 2) return Regime::kNone;
  const double ln_n = std::log(static_cast<double>(n));
  const double dense_edge = std::pow(n, -4.0 / 9.0);
  const double sparse_edge = std::pow(n, -2.0 / 3.0);
  // Compare against exp(-(ln n)^4) in log space; it underflows quickly.
  const double log_floor = -std::pow(ln_n, 4);
  const double log_p = p > 0.0 ? std::log(p) : kNegInf;

  if (p >= dense_edge) return Regime::kCase2;
  if (log_p >= log_floor && p <= sparse_edge) return Regime::kCase1;
  if (p >= sparse_edge) return Regime::kCase3;
  return Regime::kCase4;
}

std::string_view DegreeLawName(DegreeLaw law) {
  switch (law) {
    case DegreeLaw::kBand:
      return "band";
    case DegreeLaw::kExact:
      return "exact";
    case DegreeLaw::kWindow:
      break;
  }
  return "window";
}

double LogKappaTerm(int n, double p, int k) {
  CheckN(n);
  CheckProbability(p);
  if (k < 0 || k > n) return kNegInf;
  return n * std::numbers::ln2 + LogBinomialPmf(n, p, k);
}

double ExpectedExceedCount(int n, double p, int k) {
  CheckN(n);
  CheckProbability(p);
  if (k < 0 || k > n + 1) {
    Fail(ErrorCode::kOutOfRange, "k outside [0, n + 1]");
  }
  if (k == 0) return std::ldexp(1.0, n);
  if (k == n + 1) return 0.0;

  std::vector<double> logs;
  double peak = kNegInf;
  for (int l = k; l <= n; ++l) {
    logs.push_back(LogBinomialPmf(n, p, l));
    peak = std::max(peak, logs.back());
  }
  if (peak == kNegInf) return 0.0;
  CompensatedSum sum;
  for (double t : logs) sum.Add(std::exp(t - peak));
  return std::exp(n * std::numbers::ln2 + peak + std::log(sum.value()));
}

std::optional<int> Kappa(int n, double p) {
  CheckN(n);
  CheckProbability(p);
  // Slack absorbs rounding when the term is exactly 1, e.g. p = 1/2, k = 0.
  constexpr double kSlack = 1e-12;
  for (int k = n; k >= 0; --k) {
    if (LogKappaTerm(n, p, k) >= -kSlack) return k;
  }
  return std::nullopt;
}

DegreePrediction PredictedMaxDegree(int n, double p,
                                    const DegreeTheoryOptions& options) {
  const std::optional<int> kappa = Kappa(n, p);
  if (!kappa) {
    Fail(ErrorCode::kInvalidArgument,
         "kappa undefined for n=" + std::to_string(n));
  }
  DegreePrediction out;

  // Band closest to p among those consistent with kappa in {k - 1, k}.
  if (p > 0.0) {
    const double log_band = std::log(options.band_factor);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
      const double log_ref =
          -(static_cast<double>(n) / k) * std::numbers::ln2 - std::log(n);
      const double dist = std::abs(std::log(p) - log_ref);
      if (dist <= log_band && dist < best &&
          (*kappa == k - 1 || *kappa == k)) {
        best = dist;
        out.band_k = k;
      }
    }
  }
  if (out.band_k > 0) {
    out.law = DegreeLaw::kBand;
    out.range = {out.band_k - 1, out.band_k};
  } else if (p == 0.0 ||
             std::log2(p) <= -options.exp_small_alpha * static_cast<double>(n)) {
    out.law = DegreeLaw::kExact;
    out.range = {*kappa, *kappa};
  } else {
    out.law = DegreeLaw::kWindow;
    out.range = {std::max(0, *kappa - 1), std::min(n, *kappa + 1)};
  }
  return out;
}

double ConstantPResidual(double p, double c) {
  return std::numbers::ln2 + c * std::log(p) + (1.0 - c) * std::log1p(-p) -
         XLogX(c) - XLogX(1.0 - c);
}

double ConstantPCoefficient(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "p must lie in (0, 1]");
  }
  if (p >= 0.5) return 1.0;
  // Residual is ln 2 > 0 at c = p and ln(2p) < 0 at c = 1.
  double lo = p;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (ConstantPResidual(p, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(ConstantPResidual(p, lo)) <= std::abs(ConstantPResidual(p, hi))
             ? lo
             : hi;
}

double ProbMaxDegreeLt(int n, double p, int k) {
  if (k < 1 || k > n) Fail(ErrorCode::kOutOfRange, "k outside [1, n]");
  return std::clamp(std::exp(-ExpectedExceedCount(n, p, k) / 2.0), 0.0, 1.0);
}

double ProbMaxDegreeGe(int n, double p, int k) {
  if (k < 1 || k > n) Fail(ErrorCode::kOutOfRange, "k outside [1, n]");
  return std::min(1.0, ExpectedExceedCount(n, p, k));
}

double ChernoffDegreeTail(int n, double p, double t) {
  CheckN(n);
  CheckProbability(p);
  const double mu = n * p;
  if (!(mu > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "tail bound needs n p > 0");
  }
  if (t < mu) return 1.0;
  const double x = std::min(t - mu, 2.0 * mu / 3.0);
  const double exponent = -x * x / (2.0 * mu) + x * x * x / (2.0 * mu * mu);
  return std::clamp(std::exp(exponent), 0.0, 1.0);
}

DegreeProfile ComputeDegreeProfile(int n, double p,
                                   const DegreeTheoryOptions& options) {
  DegreeProfile prof;
  prof.n = n;
  prof.p = p;
  prof.kappa = Kappa(n, p);
  prof.regime = ClassifyRegime(n, p);
  if (prof.kappa) prof.predicted = PredictedMaxDegree(n, p, options);
  if (p > 0.0) prof.c_coefficient = ConstantPCoefficient(p);
  prof.exceed_counts.reserve(n + 2);
  for (int k = 0; k <= n + 1; ++k) {
    prof.exceed_counts.push_back(ExpectedExceedCount(n, p, k));
  }
  return prof;
}

}  // namespace cubespec

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cubespec/degree_theory.hpp"
#include "cubespec/eigensolve.hpp"

namespace cubespec {

// Edge probability as a function of n. Accepted spellings:
//   "0.25", "const:0.25"        p = 0.25
//   "pow:-4/9", "pow:-0.5"      p = n^e
//   "pow2:-13"                  p = 2^e
//   "sparse:3", "sparse:2^{-n/3}/n"   p = 2^(-n/k) / n
class PRule {
 public:
  enum class Kind { kConst, kPow, kPow2, kSparse };

  static PRule Parse(std::string_view text);
  static PRule Constant(double p);

  double Evaluate(int n) const;
  const std::string& label() const noexcept { return label_; }
  Kind kind() const noexcept { return kind_; }

 private:
  PRule(Kind kind, double value, std::string label)
      : kind_(kind), value_(value), label_(std::move(label)) {}

  Kind kind_;
  double value_;
  std::string label_;
};

enum class RecordFormat { kCsv, kJson };

std::string_view FormatName(RecordFormat f);
RecordFormat ParseFormat(std::string_view text);

struct LocalityQuery {
  double a = 0.0;
  double b = 0.0;
};

struct ExperimentConfig {
  std::vector<int> n_values;
  std::vector<PRule> p_rules;
  int trials = 1;
  std::uint64_t master_seed = 0;
  SolverConfig solver;
  std::string output_path;
  std::string plot_path;
  RecordFormat format = RecordFormat::kCsv;
  bool census = false;
  std::vector<LocalityQuery> locality;
  int threads = 1;

  void Validate() const;
};

// Flat "key = value" text; '#' starts a comment. Keys: n, p, trials, seed,
// tol, max_iter, max_basis, start_seed, reorthogonalize, census, locality,
// format, threads, out, plot. List values are comma separated; locality
// entries are "a:b".
ExperimentConfig ParseConfig(std::istream& in);
ExperimentConfig ParseConfigFile(const std::string& path);
// Applies one key/value pair, as a CLI override would.
void ApplyConfigValue(ExperimentConfig& config, std::string_view key,
                      std::string_view value);

struct TrialRecord {
  int n = 0;
  double p = 0.0;
  std::uint64_t trial_index = 0;
  std::uint64_t derived_seed = 0;
  std::uint64_t m = 0;
  int delta = 0;
  std::optional<int> kappa;
  Regime regime = Regime::kNone;
  double lambda1 = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double prediction = 0.0;
  std::optional<double> ratio;  // absent when prediction == 0
  std::optional<std::uint64_t> largest_component_edges;
  std::optional<bool> case4_shape;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct LocalityRecord {
  int n = 0;
  double p = 0.0;
  std::uint64_t trial_index = 0;
  double a = 0.0;
  double b = 0.0;
  int threshold = 0;
  int max_cluster = 0;
  bool conclusion_holds = false;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<std::string> series;  // p-rule label per record
  std::vector<LocalityRecord> locality;
};

TrialRecord RunTrial(int n, double p, std::uint64_t trial_index,
                     const ExperimentConfig& config);

// One record per (n, p-rule, trial) in that nesting order; identical output
// for any thread count.
ExperimentResult RunExperiment(const ExperimentConfig& config);

// Sandwich, average-degree and residual checks on a record; empty when the
// record is consistent.
std::vector<std::string> CheckRecord(const TrialRecord& r, double tol);

inline constexpr std::string_view kRecordColumns[] = {
    "n",         "p",          "trial_index", "derived_seed",
    "m",         "delta",      "kappa",       "regime",
    "lambda1",   "iterations", "residual",    "converged",
    "prediction", "ratio",     "largest_component_edges", "case4_shape"};

void WriteRecords(std::span<const TrialRecord> records, std::ostream& out,
                  RecordFormat format);
void WriteRecordsFile(std::span<const TrialRecord> records,
                      const std::string& path, RecordFormat format);
// Detects JSON by a leading '['; otherwise parses CSV.
std::vector<TrialRecord> ReadRecords(std::istream& in);
std::vector<TrialRecord> ReadRecordsFile(const std::string& path);

void WriteLocalityFile(std::span<const LocalityRecord> rows,
                       const std::string& path);

struct SummaryRow {
  int n = 0;
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t ratio_count = 0;
  double ratio_median = 0.0;
  double ratio_mean = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::size_t delta_in_range = 0;
  double delta_in_range_freq = 0.0;
  double convergence_rate = 0.0;
  DegreeInterval predicted_delta;
};

// Grouped by (n, p), ascending.
std::vector<SummaryRow> Summarize(std::span<const TrialRecord> records);
void WriteSummary(std::span<const SummaryRow> rows, std::ostream& out);

// Scatter of ratio against n, one series per label (labels[i] belongs to
// records[i]); an empty label list groups by p.
void PlotRatio(std::span<const TrialRecord> records,
               std::span<const std::string> labels, std::ostream& out);
void PlotRatioFile(std::span<const TrialRecord> records,
                   std::span<const std::string> labels,
                   const std::string& path);

struct VerifyReport {
  std::uint64_t graphs = 0;
  std::uint64_t checks = 0;
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Samples every (n, p, trial) of the config and checks the structural and
// spectral invariants on each graph.
VerifyReport RunVerification(const ExperimentConfig& config);

struct TailRow {
  int k = 0;
  double bound_lt = 0.0;
  double bound_ge = 0.0;
  double mc_lt = 0.0;
  double mc_ge = 0.0;
  std::uint64_t trials = 0;
};

// Bounds on Pr(Delta < k) and Pr(Delta >= k), k = 1..n, beside their
// Monte Carlo frequencies.
std::vector<TailRow> TailsTable(int n, double p, int trials,
                                std::uint64_t master_seed, int threads = 1);
void WriteTails(std::span<const TailRow> rows, std::ostream& out);

// printf("%.17g") rendering used by every text output.
std::string FormatReal(double x);

}  // namespace cubespec

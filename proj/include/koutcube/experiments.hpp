#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "koutcube/rng.hpp"
#include "koutcube/sampler.hpp"
#include "koutcube/stats.hpp"

namespace koutcube {

// Metric names in emission order.
inline constexpr std::string_view kMetricNames[] = {
    "component_count", "giant_fraction", "second_fraction", "two_cycles",
    "longer_cycles",   "max_tail",       "Z_prime",         "connected",
    "kappa",           "degree_k_count", "subcube_hits",
};

bool is_known_metric(std::string_view name);
// 0/1-valued metrics that get Wilson intervals.
bool is_bernoulli_metric(std::string_view name);
// Cycle metrics are defined on the functional digraph and need k = 1.
bool is_cycle_metric(std::string_view name);

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<int> n_values;
  std::vector<int> k_values;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::string> metrics;  // any subset of kMetricNames
  int kappa_ceiling = 0;             // 0 means n
  int active_cap = 8;
  unsigned threads = 0;              // 0 means KOUTCUBE_THREADS or 1

  // Throws InvalidParameter for malformed grids or metric lists and
  // BudgetExceeded when a selected analysis is over its size cap.
  void validate() const;
  std::uint64_t record_count() const;
};

struct TrialRecord {
  std::string experiment;
  int n = 0;
  int k = 0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> metrics;  // in kMetricNames order

  std::optional<double> metric(std::string_view name) const;
  // One JSON object, no trailing newline.
  std::string to_json() const;
  static TrialRecord from_json(std::string_view line);
};

// 64-bit mix of (master, n, k, trial); independent of scheduling.
std::uint64_t trial_seed(std::uint64_t master, int n, int k, std::uint64_t trial);

// The sample a record's seed denotes: sample_kout(n, k, Seed{seed, 0}).
KOutSample trial_sample(Dimension n, int k, std::uint64_t seed);

// Worker count: explicit request, else KOUTCUBE_THREADS, else 1.
unsigned resolve_threads(unsigned requested);

// Selected metrics of one sample, in kMetricNames order.
std::vector<std::pair<std::string, double>> measure(const ExperimentConfig& config,
                                                    const KOutSample& sample);

// Metrics of one trial.
TrialRecord run_trial(const ExperimentConfig& config, int n, int k, std::uint64_t trial);

// Validates, then runs every (n, k, trial) in that nesting order and hands
// records to `sink` in that order whatever the worker count. Records are
// produced in bounded batches, not buffered for the whole run.
void run(const ExperimentConfig& config, const std::function<void(const TrialRecord&)>& sink);

// Writes one JSON line per record.
void run_jsonl(const ExperimentConfig& config, std::ostream& out);

struct SummaryRow {
  int n = 0;
  int k = 0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  std::optional<stats::Interval> wilson;  // Bernoulli metrics only
  double min = 0.0;
  double max = 0.0;
  std::uint64_t count = 0;
};

// Group-by (n, k, metric), ordered by n, k, then metric emission order
// (unknown metric names last, alphabetically).
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

inline constexpr std::string_view kSummaryHeader = "n,k,metric,mean,std,wilson_lo,wilson_hi,min,max,count";
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

std::vector<TrialRecord> read_records(std::istream& in);

struct SweepPoint {
  int k = 0;
  std::uint64_t connected = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  stats::Interval wilson;
};

struct SweepResult {
  int n = 0;
  double k0 = 0.0;
  int k1 = 0;
  std::vector<SweepPoint> points;
};

SweepResult threshold_sweep(int n, int k_min, int k_max, std::uint64_t trials, std::uint64_t seed,
                            unsigned threads = 0);

// Edge-isoperimetric check d(A, V \ A) >= n|A| - |A| log2 |A| for nonempty A.
// Every A is tried for n <= 4; otherwise `samples` random sets whose sizes
// are log-uniform on [1, 2^n). Equality is checked on every subcube.
struct IsoCheckReport {
  int n = 0;
  bool exhaustive = false;
  std::uint64_t sets_checked = 0;
  std::uint64_t violations = 0;
  double min_slack = 0.0;  // smallest d(A, V \ A) - bound seen
  double mean_slack = 0.0;
  std::uint64_t subcubes_checked = 0;
  std::uint64_t subcube_equality_failures = 0;
};

IsoCheckReport iso_check(Dimension n, std::uint64_t samples, std::uint64_t seed);

}  // namespace koutcube

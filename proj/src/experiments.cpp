#include "koutcube/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "koutcube/connectivity.hpp"
#include "koutcube/errors.hpp"
#include "koutcube/structure.hpp"

namespace koutcube {

namespace {

bool contains(std::span<const std::string> list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

std::size_t metric_rank(std::string_view name) {
  const auto* it = std::find(std::begin(kMetricNames), std::end(kMetricNames), name);
  return static_cast<std::size_t>(it - std::begin(kMetricNames));
}

}  // namespace

bool is_known_metric(std::string_view name) { return metric_rank(name) < std::size(kMetricNames); }
bool is_bernoulli_metric(std::string_view name) { return name == "connected"; }
bool is_cycle_metric(std::string_view name) {
  return name == "two_cycles" || name == "longer_cycles" || name == "max_tail";
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidParameter("trials must be at least 1");
  if (n_values.empty() || k_values.empty()) throw InvalidParameter("n and k lists must be non-empty");
  for (const auto& m : metrics) {
    if (!is_known_metric(m)) throw InvalidParameter("unknown metric '" + m + "'");
  }
  const bool cycles = std::any_of(metrics.begin(), metrics.end(),
                                  [](const std::string& m) { return is_cycle_metric(m); });
  for (int n : n_values) {
    if (n < 1 || n > kMaxDimension) {
      throw InvalidParameter("n = " + std::to_string(n) + " outside [1, 30]");
    }
    for (int k : k_values) {
      if (k < 1 || k > n) {
        throw InvalidParameter("infeasible pair (n, k) = (" + std::to_string(n) + ", " +
                               std::to_string(k) + "): need 1 <= k <= n");
      }
      if (cycles && k != 1) throw InvalidParameter("cycle metrics need k = 1");
    }
    if (contains(metrics, "kappa") && (std::uint64_t{1} << n) > kMaxFlowVertices) {
      throw BudgetExceeded("kappa needs 2^n <= " + std::to_string(kMaxFlowVertices) + ", got n = " +
                           std::to_string(n));
    }
  }
  if (kappa_ceiling < 0) throw InvalidParameter("kappa ceiling must be non-negative");
}

std::uint64_t ExperimentConfig::record_count() const {
  return trials * n_values.size() * k_values.size();
}

std::optional<double> TrialRecord::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  return std::nullopt;
}

namespace {

nlohmann::ordered_json number(double value) {
  if (value >= 0.0 && value < 0x1.0p63 && std::floor(value) == value) {
    return static_cast<std::uint64_t>(value);
  }
  return value;
}

}  // namespace

std::string TrialRecord::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["n"] = n;
  j["k"] = k;
  j["trial"] = trial;
  j["seed"] = seed;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metrics) m[key] = number(value);
  j["metrics"] = std::move(m);
  return j.dump();
}

TrialRecord TrialRecord::from_json(std::string_view line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
    TrialRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.n = j.at("n").get<int>();
    r.k = j.at("k").get<int>();
    r.trial = j.at("trial").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("metrics").items()) {
      r.metrics.emplace_back(key, value.get<double>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad trial record: ") + e.what());
  }
}

std::uint64_t trial_seed(std::uint64_t master, int n, int k, std::uint64_t trial) {
  std::uint64_t h = mix64(master);
  h = combine(h, static_cast<std::uint64_t>(n));
  h = combine(h, static_cast<std::uint64_t>(k));
  return combine(h, trial);
}

KOutSample trial_sample(Dimension n, int k, std::uint64_t seed) {
  return sample_kout(n, k, Seed{seed, 0});
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KOUTCUBE_THREADS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0 && value <= 1024) return static_cast<unsigned>(value);
  }
  return 1;
}

std::vector<std::pair<std::string, double>> measure(const ExperimentConfig& config,
                                                    const KOutSample& sample) {
  const Dimension dim = sample.n();
  const int n = dim.value();
  const int k = sample.k();
  const CubeGraph g = as_undirected(sample);
  auto wants = [&](std::string_view m) { return contains(config.metrics, m); };

  std::optional<ComponentSummary> summary;
  if (wants("component_count") || wants("giant_fraction") || wants("second_fraction") ||
      wants("Z_prime") || wants("connected")) {
    summary = components(g);
  }
  std::optional<CycleCensus> cycles;
  if (wants("two_cycles") || wants("longer_cycles") || wants("max_tail")) {
    if (k != 1) throw InvalidParameter("cycle metrics need k = 1");
    std::vector<std::uint8_t> dirs(dim.vertex_count());
    for (VertexId v = 0; v < dirs.size(); ++v) {
      dirs[v] = static_cast<std::uint8_t>(std::countr_zero(sample.choice(v)));
    }
    cycles = cycle_census(FunctionalMap(dim, std::move(dirs)));
  }

  std::vector<std::pair<std::string, double>> out;
  for (std::string_view name : kMetricNames) {
    if (!wants(name)) continue;
    double value = 0.0;
    if (name == "component_count") value = static_cast<double>(summary->count);
    else if (name == "giant_fraction") value = summary->giant_fraction;
    else if (name == "second_fraction") value = summary->second_fraction;
    else if (name == "two_cycles") value = static_cast<double>(cycles->two_cycles);
    else if (name == "longer_cycles") value = static_cast<double>(cycles->longer);
    else if (name == "max_tail") value = static_cast<double>(cycles->max_tail);
    else if (name == "Z_prime") value = static_cast<double>(pair_statistic(*summary));
    else if (name == "connected") value = summary->count == 1 ? 1.0 : 0.0;
    else if (name == "kappa") {
      const int ceiling = config.kappa_ceiling > 0 ? std::min(config.kappa_ceiling, n) : n;
      value = vertex_connectivity(g, ceiling);
    } else if (name == "degree_k_count") {
      value = static_cast<double>(degree_census(g, k).degree_k_count);
    } else if (name == "subcube_hits") {
      value = static_cast<double>(subcube_component_scan(sample).size());
    }
    out.emplace_back(std::string(name), value);
  }
  return out;
}

TrialRecord run_trial(const ExperimentConfig& config, int n, int k, std::uint64_t trial) {
  TrialRecord r;
  r.experiment = config.name;
  r.n = n;
  r.k = k;
  r.trial = trial;
  r.seed = trial_seed(config.master_seed, n, k, trial);
  r.metrics = measure(config, trial_sample(Dimension(n), k, r.seed));
  return r;
}

void run(const ExperimentConfig& config, const std::function<void(const TrialRecord&)>& sink) {
  config.validate();
  struct Task {
    int n;
    int k;
    std::uint64_t trial;
  };
  const unsigned workers = resolve_threads(config.threads);
  const std::uint64_t batch = std::max<std::uint64_t>(64, std::uint64_t{workers} * 16);
  const std::uint64_t per_pair = config.trials;
  const std::uint64_t total = config.record_count();
  const std::uint64_t pairs_per_n = config.k_values.size();

  auto task_at = [&](std::uint64_t index) {
    const std::uint64_t pair = index / per_pair;
    return Task{config.n_values[pair / pairs_per_n], config.k_values[pair % pairs_per_n],
                index % per_pair};
  };

  std::vector<TrialRecord> buffer;
  for (std::uint64_t start = 0; start < total; start += batch) {
    const std::uint64_t count = std::min(batch, total - start);
    buffer.assign(count, TrialRecord{});
    if (workers <= 1 || count == 1) {
      for (std::uint64_t i = 0; i < count; ++i) {
        const Task t = task_at(start + i);
        buffer[i] = run_trial(config, t.n, t.k, t.trial);
      }
    } else {
      std::atomic<std::uint64_t> next{0};
      std::exception_ptr failure;
      std::mutex failure_lock;
      auto work = [&] {
        try {
          for (std::uint64_t i = next++; i < count; i = next++) {
            const Task t = task_at(start + i);
            buffer[i] = run_trial(config, t.n, t.k, t.trial);
          }
        } catch (...) {
          const std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      };
      std::vector<std::thread> pool;
      const auto spawn = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
      for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
      if (failure) std::rethrow_exception(failure);
    }
    for (const auto& r : buffer) sink(r);
  }
}

void run_jsonl(const ExperimentConfig& config, std::ostream& out) {
  run(config, [&](const TrialRecord& r) { out << r.to_json() << '\n'; });
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<int, int, std::size_t, std::string>;
  std::map<Key, stats::RunningStats> groups;
  std::map<Key, bool> binary;
  for (const auto& r : records) {
    for (const auto& [name, value] : r.metrics) {
      const Key key{r.n, r.k, metric_rank(name), name};
      groups[key].add(value);
      auto [it, fresh] = binary.try_emplace(key, true);
      if (value != 0.0 && value != 1.0) it->second = false;
    }
  }
  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    SummaryRow row;
    row.n = std::get<0>(key);
    row.k = std::get<1>(key);
    row.metric = std::get<3>(key);
    row.mean = acc.mean();
    row.stddev = acc.stddev();
    row.min = acc.min();
    row.max = acc.max();
    row.count = acc.count();
    // Known 0/1 metrics, and unrecognized ones whose values are all 0/1.
    const bool bernoulli = is_bernoulli_metric(row.metric) ||
                           (!is_known_metric(row.metric) && binary.at(key));
    if (bernoulli && binary.at(key)) {
      const auto successes = static_cast<std::uint64_t>(std::llround(acc.mean() * acc.count()));
      row.wilson = stats::wilson(successes, acc.count());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) {
    out << row.n << ',' << row.k << ',' << row.metric << ',' << format_number(row.mean) << ','
        << format_number(row.stddev) << ',';
    if (row.wilson) out << format_number(row.wilson->lo) << ',' << format_number(row.wilson->hi);
    else out << ',';
    out << ',' << format_number(row.min) << ',' << format_number(row.max) << ',' << row.count
        << '\n';
  }
}

std::vector<TrialRecord> read_records(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(TrialRecord::from_json(line));
  }
  return out;
}

SweepResult threshold_sweep(int n, int k_min, int k_max, std::uint64_t trials, std::uint64_t seed,
                            unsigned threads) {
  if (k_min < 1 || k_max > n || k_min > k_max) {
    throw InvalidParameter("k range must satisfy 1 <= k-min <= k-max <= n");
  }
  ExperimentConfig config;
  config.name = "threshold_sweep";
  config.n_values = {n};
  for (int k = k_min; k <= k_max; ++k) config.k_values.push_back(k);
  config.trials = trials;
  config.master_seed = seed;
  config.metrics = {"connected"};
  config.threads = threads;

  SweepResult out;
  out.n = n;
  out.k0 = n >= 2 ? threshold_k0(n) : std::nan("");
  out.k1 = n >= 2 ? threshold_k1(n) : 1;
  for (int k : config.k_values) out.points.push_back(SweepPoint{k, 0, 0, 0.0, {}});
  run(config, [&](const TrialRecord& r) {
    auto& p = out.points[static_cast<std::size_t>(r.k - k_min)];
    ++p.trials;
    if (r.metrics.front().second == 1.0) ++p.connected;
  });
  for (auto& p : out.points) {
    p.rate = static_cast<double>(p.connected) / static_cast<double>(p.trials);
    p.wilson = stats::wilson(p.connected, p.trials);
  }
  return out;
}

namespace {

// d(A, V \ A) from a membership bitmap.
std::uint64_t cut_size(Dimension n, const std::vector<std::uint8_t>& in) {
  std::uint64_t cut = 0;
  for (VertexId v = 0; v < in.size(); ++v) {
    if (!in[v]) continue;
    for (int d = 0; d < n.value(); ++d) cut += in[flip(v, d)] ? 0 : 1;
  }
  return cut;
}

}  // namespace

IsoCheckReport iso_check(Dimension n, std::uint64_t samples, std::uint64_t seed) {
  const std::uint64_t count = n.vertex_count();
  IsoCheckReport out;
  out.n = n.value();
  out.exhaustive = n.value() <= 4;
  out.min_slack = std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> in(count, 0);
  // Integral cut sizes against a real bound: allow rounding in the bound only.
  constexpr double kSlackTolerance = 1e-9;
  double slack_sum = 0.0;
  auto check = [&](std::uint64_t size) {
    const double slack = static_cast<double>(cut_size(n, in)) - iso_lower_bound(n, size);
    out.min_slack = std::min(out.min_slack, slack);
    slack_sum += slack;
    if (slack < -kSlackTolerance) ++out.violations;
    ++out.sets_checked;
  };

  if (out.exhaustive) {
    const std::uint64_t sets = std::uint64_t{1} << count;
    for (std::uint64_t a = 1; a < sets; ++a) {
      for (VertexId v = 0; v < count; ++v) in[v] = (a >> v) & 1U;
      check(static_cast<std::uint64_t>(std::popcount(a)));
    }
  } else {
    auto rng = make_stream(Seed{seed, 0}, StreamTag::subsets, 0);
    std::vector<VertexId> order(count);
    for (VertexId v = 0; v < count; ++v) order[v] = v;
    for (std::uint64_t i = 0; i < samples; ++i) {
      const double exponent = rng.unit() * static_cast<double>(n.value());
      const auto size = std::clamp<std::uint64_t>(
          static_cast<std::uint64_t>(std::exp2(exponent)), 1, count - 1);
      // Partial Fisher-Yates: the first `size` entries form a uniform subset.
      std::fill(in.begin(), in.end(), 0);
      for (std::uint64_t j = 0; j < size; ++j) {
        const std::uint64_t pick = j + rng.below(static_cast<std::uint32_t>(count - j));
        std::swap(order[j], order[pick]);
        in[order[j]] = 1;
      }
      check(size);
    }
  }

  if (out.sets_checked > 0) out.mean_slack = slack_sum / static_cast<double>(out.sets_checked);

  // Subcubes through vertex 0 (translates are isomorphic): every free set
  // when exhaustive, one per dimension otherwise.
  std::vector<DirectionMask> free_sets;
  if (out.exhaustive) {
    for (DirectionMask m = 0; m <= n.full_mask(); ++m) free_sets.push_back(m);
  } else {
    for (int f = 0; f <= n.value(); ++f) free_sets.push_back(n.full_mask() >> (n.value() - f));
  }
  for (DirectionMask free : free_sets) {
    std::fill(in.begin(), in.end(), 0);
    const SubcubeSpec spec{0, free, n.full_mask() & ~free};
    for (VertexId v : subcube_vertices(spec, n)) in[v] = 1;
    const double gap = static_cast<double>(cut_size(n, in)) - iso_lower_bound(n, spec.vertex_count());
    if (std::abs(gap) > kSlackTolerance) ++out.subcube_equality_failures;
    ++out.subcubes_checked;
  }
  return out;
}

}  // namespace koutcube

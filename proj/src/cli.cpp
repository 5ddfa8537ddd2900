#include "koutcube/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "koutcube/connectivity.hpp"
#include "koutcube/errors.hpp"
#include "koutcube/experiments.hpp"
#include "koutcube/walk.hpp"

namespace koutcube::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  int n = 0;
  int k = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "jsonl";
  std::string out_path;
  std::string input;
  int ceiling = 0;
  int cap = kDefaultActiveCap;
  std::uint64_t horizon = 0;
  std::uint64_t runs = 0;
  int k_min = 1;
  int k_max = 0;
  std::uint64_t samples = 10000;
  std::vector<VertexId> removal;
  bool removal_given = false;
  bool plant = false;
  int level = 0;
};

// Where results go: the --out file if given, else the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary) : stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!file_) throw Error("cannot open output file '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

KOutSample load_sample(const std::string& path, std::uint64_t& seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file '" + path + "'");
  LoadedSample loaded = read_sample(in);
  seed = loaded.seed;
  return std::move(loaded.sample);
}

// components, cycles and kconn: trial records or their summary.
void emit_records(const Options& o, ExperimentConfig config, std::ostream& out) {
  if (!o.input.empty()) {
    std::uint64_t seed = 0;
    const KOutSample sample = load_sample(o.input, seed);
    if (o.format == "jsonl") {
      config.n_values = {sample.n().value()};
      config.k_values = {sample.k()};
      config.validate();
    }
    TrialRecord r;
    r.experiment = config.name;
    r.n = sample.n().value();
    r.k = sample.k();
    r.seed = seed;
    r.metrics = measure(config, sample);
    if (o.format == "jsonl") out << r.to_json() << '\n';
    else write_summary_csv(out, summarize({r}));
    return;
  }
  if (o.format == "jsonl") {
    run_jsonl(config, out);
    return;
  }
  std::vector<TrialRecord> records;
  records.reserve(config.record_count());
  run(config, [&](const TrialRecord& r) { records.push_back(r); });
  write_summary_csv(out, summarize(records));
}

ExperimentConfig base_config(const Options& o, std::string name) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.n_values = {o.n};
  c.k_values = {o.k};
  c.trials = o.trials;
  c.master_seed = o.seed;
  c.threads = o.threads;
  c.kappa_ceiling = o.ceiling;
  c.active_cap = o.cap;
  return c;
}

void check_pair(int n, int k, int k_floor = 1) {
  if (n < 1 || n > kMaxDimension) throw InvalidParameter("--n must lie in [1, 30]");
  if (k < k_floor || k > n) {
    throw InvalidParameter("--k must lie in [" + std::to_string(k_floor) + ", n]");
  }
}

void cmd_sample(const Options& o, std::ostream& out) {
  check_pair(o.n, o.k);
  const KOutSample sample = trial_sample(Dimension(o.n), o.k, o.seed);
  Sink sink(o.out_path, out, true);
  write_sample(sink.get(), sample, o.seed);
}

void cmd_components(const Options& o, std::ostream& out) {
  ExperimentConfig c = base_config(o, "components");
  c.metrics = {"component_count", "giant_fraction", "second_fraction", "Z_prime", "connected"};
  Sink sink(o.out_path, out, false);
  emit_records(o, c, sink.get());
}

void cmd_cycles(const Options& o, std::ostream& out) {
  ExperimentConfig c = base_config(o, "cycles");
  c.k_values = {1};
  c.metrics = {"component_count", "two_cycles", "longer_cycles", "max_tail"};
  Sink sink(o.out_path, out, false);
  emit_records(o, c, sink.get());
}

void cmd_kconn(const Options& o, std::ostream& out) {
  ExperimentConfig c = base_config(o, "kconn");
  c.metrics = {"connected", "kappa", "degree_k_count"};
  if (o.input.empty()) c.validate();  // refuse oversized cubes before opening --out
  Sink sink(o.out_path, out, false);
  emit_records(o, c, sink.get());
}

Json vertex_list(std::span<const VertexId> vs) {
  Json a = Json::array();
  for (VertexId v : vs) a.push_back(v);
  return a;
}

void cmd_cut_census(const Options& o, std::ostream& out) {
  check_pair(o.n, o.k, o.removal_given ? 1 : 2);
  if (o.trials < 1) throw InvalidParameter("--trials must be at least 1");
  if (!o.removal_given && o.cap > kMaxActiveCap) {
    throw BudgetExceeded("--cap " + std::to_string(o.cap) + " exceeds the enumeration limit " +
                         std::to_string(kMaxActiveCap));
  }
  const Dimension dim(o.n);
  for (VertexId v : o.removal) {
    if (v >= dim.vertex_count()) throw InvalidParameter("--removal vertex out of range");
  }
  Sink sink(o.out_path, out, false);
  std::ostream& os = sink.get();
  if (o.format == "csv") {
    os << (o.removal_given ? "n,k,trial,seed,set_index,set_size,min_vertex\n"
                           : "n,k,trial,seed,cap,active_count,witness_count\n");
  }
  for (std::uint64_t t = 0; t < o.trials; ++t) {
    const std::uint64_t seed = trial_seed(o.seed, o.n, o.k, t);
    Json j;
    j["experiment"] = "cut-census";
    j["n"] = o.n;
    j["k"] = o.k;
    j["trial"] = t;
    j["seed"] = seed;
    if (o.removal_given) {
      // Minimal L-disconnected sets of the k-out sample itself.
      const DisconnectionCensus census =
          minimal_disconnected_sets(as_undirected(trial_sample(dim, o.k, seed)), o.removal);
      if (o.format == "csv") {
        for (std::size_t i = 0; i < census.sets.size(); ++i) {
          os << o.n << ',' << o.k << ',' << t << ',' << seed << ',' << i << ','
             << census.sets[i].size() << ',' << census.sets[i].front() << '\n';
        }
        continue;
      }
      j["removal"] = vertex_list(census.removal);
      Json sets = Json::array();
      for (const auto& s : census.sets) sets.push_back(vertex_list(s));
      j["set_count"] = census.sets.size();
      j["sets"] = std::move(sets);
    } else {
      // Active set of G0 = Q^n(k - 1) as used by the staged construction.
      const ActiveSetReport report = active_set(trial_sample(dim, o.k - 1, seed), o.cap);
      if (o.format == "csv") {
        os << o.n << ',' << o.k << ',' << t << ',' << seed << ',' << o.cap << ',' << report.count()
           << ',' << report.witnesses.size() << '\n';
        continue;
      }
      j["cap"] = o.cap;
      j["removal_size"] = report.removal_size;
      j["active_count"] = report.count();
      Json witnesses = Json::array();
      for (const auto& w : report.witnesses) {
        Json e;
        e["set"] = vertex_list(w.set);
        e["removal"] = vertex_list(w.removal);
        witnesses.push_back(std::move(e));
      }
      j["witnesses"] = std::move(witnesses);
    }
    os << j.dump() << '\n';
  }
}

Json spec_json(const SubcubeSpec& s) {
  Json j;
  j["ones"] = s.ones;
  j["free"] = s.free;
  j["zeros"] = s.zeros;
  j["level"] = s.level();
  return j;
}

void cmd_subcube_scan(const Options& o, std::ostream& out) {
  check_pair(o.n, o.k);
  if (o.trials < 1) throw InvalidParameter("--trials must be at least 1");
  const Dimension dim(o.n);
  std::optional<SubcubeSpec> planted;
  if (o.plant) {
    if (o.level < 0 || o.level > o.n - o.k) throw InvalidParameter("--level must lie in [0, n - k]");
    // Free coordinates 0..k-1, the next `level` fixed to 1, the rest to 0.
    const DirectionMask free = (DirectionMask{1} << o.k) - 1;
    const DirectionMask ones = ((DirectionMask{1} << o.level) - 1) << o.k;
    planted = SubcubeSpec{ones, free, dim.full_mask() & ~(free | ones)};
  }
  Sink sink(o.out_path, out, false);
  std::ostream& os = sink.get();
  if (o.format == "csv") os << "n,k,trial,seed,planted,subcube_count,planted_found,connected\n";
  for (std::uint64_t t = 0; t < o.trials; ++t) {
    const std::uint64_t seed = trial_seed(o.seed, o.n, o.k, t);
    const KOutSample sample = planted ? plant_subcube_component(dim, o.k, *planted, Seed{seed, 0})
                                      : trial_sample(dim, o.k, seed);
    const auto found = subcube_component_scan(sample);
    const bool connected = is_connected(as_undirected(sample));
    const bool hit = planted && std::find(found.begin(), found.end(), *planted) != found.end();
    if (o.format == "csv") {
      os << o.n << ',' << o.k << ',' << t << ',' << seed << ',' << (planted ? 1 : 0) << ','
         << found.size() << ',' << (hit ? 1 : 0) << ',' << (connected ? 1 : 0) << '\n';
      continue;
    }
    Json j;
    j["experiment"] = "subcube-scan";
    j["n"] = o.n;
    j["k"] = o.k;
    j["trial"] = t;
    j["seed"] = seed;
    j["planted"] = planted ? spec_json(*planted) : Json(nullptr);
    j["planted_found"] = hit;
    j["connected"] = connected;
    Json list = Json::array();
    for (const auto& s : found) list.push_back(spec_json(s));
    j["subcubes"] = std::move(list);
    os << j.dump() << '\n';
  }
}

void emit_object(const Json& j, const std::string& format, std::ostream& os) {
  if (format == "jsonl") {
    os << j.dump() << '\n';
    return;
  }
  std::string header;
  std::string row;
  for (const auto& [key, value] : j.items()) {
    if (value.is_structured()) continue;
    header += (header.empty() ? "" : ",") + key;
    row += (row.empty() ? "" : ",") +
           (value.is_number_float() ? format_number(value.get<double>()) : value.dump());
  }
  os << header << '\n' << row << '\n';
}

void cmd_walk(const Options& o, std::ostream& out) {
  if (o.n < 1) throw InvalidParameter("--n must be at least 1");
  WalkParams params = WalkParams::for_dimension(o.n);
  if (o.horizon > 0) params.horizon = o.horizon;
  params.validate();
  const WalkDistribution dist = exact_distribution(params);
  Sink sink(o.out_path, out, false);
  if (o.format == "csv") {
    // Per-step law: one row per reachable (step, state).
    std::ostream& os = sink.get();
    os << "step,state,mass\n";
    for (std::uint64_t i = 0; i <= params.horizon; ++i) {
      const auto row = dist.at(i);
      for (std::size_t s = 0; s < row.size(); ++s) {
        if (row[s] != 0.0) os << i << ',' << s << ',' << format_number(row[s]) << '\n';
      }
    }
    return;
  }

  Json j;
  j["n"] = o.n;
  j["horizon"] = params.horizon;
  j["window_first"] = dist.window_first();
  j["window_last"] = dist.window_last();
  j["window_hit_probability"] = dist.window_hit_probability();
  j["window_bound"] = std::pow(static_cast<double>(o.n), -4.0);
  j["conservation_error"] = dist.conservation_error();
  if (o.n >= 40) {
    // The step and conditional bounds are stated for n large enough that
    // floor(n/40) >= 1.
    const WalkBoundReport bounds = check_walk_bounds(o.n);
    j["early_step"] = bounds.early_step;
    j["low_threshold"] = bounds.low_threshold;
    j["early_low_probability"] = bounds.early_low_probability;
    j["exp_bound"] = bounds.exp_bound;
    j["conditional_steps"] = bounds.conditional_steps;
    j["conditional_worst"] = bounds.conditional_worst;
    j["window_ok"] = bounds.window_ok();
    j["early_ok"] = bounds.early_ok();
    j["conditional_ok"] = bounds.conditional_ok();
  }
  if (o.runs > 0) {
    // Monte Carlo estimates of P(L_{2l} = 0) next to the exact values.
    const std::uint64_t last = std::min<std::uint64_t>(5, params.horizon / 2);
    std::vector<std::uint64_t> hits(last + 1, 0);
    for (std::uint64_t r = 0; r < o.runs; ++r) {
      const auto path = simulate_walk(params, Seed{o.seed, r});
      for (std::uint64_t l = 1; l <= last; ++l) hits[l] += path[2 * l] == 0 ? 1 : 0;
    }
    Json mc = Json::array();
    for (std::uint64_t l = 1; l <= last; ++l) {
      const double exact = dist.mass(2 * l, 0);
      Json e;
      e["step"] = 2 * l;
      e["exact"] = exact;
      e["estimate"] = static_cast<double>(hits[l]) / static_cast<double>(o.runs);
      e["sigma"] = stats::binomial_sigma(exact, o.runs);
      mc.push_back(std::move(e));
    }
    j["runs"] = o.runs;
    j["return_to_origin"] = std::move(mc);
  }
  sink.get() << j.dump() << '\n';
}

void cmd_iso_check(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.n > 20) throw InvalidParameter("--n must lie in [1, 20]");
  const IsoCheckReport r = iso_check(Dimension(o.n), o.samples, o.seed);
  Json j;
  j["n"] = r.n;
  j["exhaustive"] = r.exhaustive;
  j["sets_checked"] = r.sets_checked;
  j["violations"] = r.violations;
  j["min_slack"] = r.min_slack;
  j["mean_slack"] = r.mean_slack;
  j["subcubes_checked"] = r.subcubes_checked;
  j["subcube_equality_failures"] = r.subcube_equality_failures;
  Sink sink(o.out_path, out, false);
  emit_object(j, o.format, sink.get());
}

void cmd_sweep(const Options& o, std::ostream& out) {
  const int k_max = o.k_max > 0 ? o.k_max : o.n;
  check_pair(o.n, 1);
  const SweepResult sweep = threshold_sweep(o.n, o.k_min, k_max, o.trials, o.seed, o.threads);
  Sink sink(o.out_path, out, false);
  std::ostream& os = sink.get();
  if (o.format == "csv") os << "n,k,k0,k1,trials,connected,rate,wilson_lo,wilson_hi\n";
  for (const auto& p : sweep.points) {
    if (o.format == "csv") {
      os << sweep.n << ',' << p.k << ',' << format_number(sweep.k0) << ',' << sweep.k1 << ','
         << p.trials << ',' << p.connected << ',' << format_number(p.rate) << ','
         << format_number(p.wilson.lo) << ',' << format_number(p.wilson.hi) << '\n';
      continue;
    }
    Json j;
    j["n"] = sweep.n;
    j["k"] = p.k;
    j["k0"] = std::isnan(sweep.k0) ? Json(nullptr) : Json(sweep.k0);
    j["k1"] = sweep.k1;
    j["trials"] = p.trials;
    j["connected"] = p.connected;
    j["rate"] = p.rate;
    j["wilson_lo"] = p.wilson.lo;
    j["wilson_hi"] = p.wilson.hi;
    os << j.dump() << '\n';
  }
}

void cmd_summarize(const Options& o, std::ostream& out) {
  std::vector<TrialRecord> records;
  if (o.input == "-") {
    records = read_records(std::cin);
  } else {
    std::ifstream in(o.input);
    if (!in) throw Error("cannot open input file '" + o.input + "'");
    records = read_records(in);
  }
  const auto rows = summarize(records);
  Sink sink(o.out_path, out, false);
  std::ostream& os = sink.get();
  if (o.format == "csv") {
    write_summary_csv(os, rows);
    return;
  }
  for (const auto& row : rows) {
    Json j;
    j["n"] = row.n;
    j["k"] = row.k;
    j["metric"] = row.metric;
    j["mean"] = row.mean;
    j["std"] = row.stddev;
    j["wilson_lo"] = row.wilson ? Json(row.wilson->lo) : Json(nullptr);
    j["wilson_hi"] = row.wilson ? Json(row.wilson->hi) : Json(nullptr);
    j["min"] = row.min;
    j["max"] = row.max;
    j["count"] = row.count;
    os << j.dump() << '\n';
  }
}

std::vector<VertexId> parse_vertex_list(const std::string& text) {
  std::vector<VertexId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || value > 0xffffffffUL) {
      throw InvalidParameter("--removal expects comma-separated vertex ids, got '" + item + "'");
    }
    out.push_back(static_cast<VertexId>(value));
  }
  return out;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiments on k-out random subgraphs of the hypercube", "koutcube"};
  app.require_subcommand(1, 1);
  Options o;
  std::string removal_text;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "master seed")->capture_default_str(); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out_path, "write output to this file"); };
  auto add_nk = [&](CLI::App* c, bool need_n) {
    auto* n = c->add_option("--n", o.n, "cube dimension");
    if (need_n) n->required();
    c->add_option("--k", o.k, "choices per vertex")->capture_default_str();
  };
  auto add_trials = [&](CLI::App* c) {
    c->add_option("--trials", o.trials, "trials")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "worker threads (default: KOUTCUBE_THREADS or 1)");
  };

  auto* sample = app.add_subcommand("sample", "write one k-out sample in the binary format");
  add_nk(sample, true);
  add_seed(sample);
  add_out(sample);

  auto* comps = app.add_subcommand("components", "component census per trial");
  auto* cycles = app.add_subcommand("cycles", "cycle and tail census of 1-out samples");
  auto* kconn = app.add_subcommand("kconn", "connectivity, vertex connectivity and degree-k count");
  for (auto* c : {comps, cycles, kconn}) {
    add_nk(c, false);
    add_trials(c);
    add_seed(c);
    add_threads(c);
    add_format(c);
    add_out(c);
    c->add_option("--input", o.input, "analyze a saved binary sample instead of drawing trials");
  }
  kconn->add_option("--ceiling", o.ceiling, "stop once kappa reaches this value (default n)")
      ->check(CLI::NonNegativeNumber);

  auto* cuts = app.add_subcommand("cut-census", "active set of G0, or minimal L-disconnected sets");
  add_nk(cuts, true);
  add_trials(cuts);
  add_seed(cuts);
  add_format(cuts);
  add_out(cuts);
  cuts->add_option("--cap", o.cap, "largest set size enumerated")->check(CLI::PositiveNumber)->capture_default_str();
  cuts->add_option("--removal", removal_text, "comma-separated removal set L");

  auto* scan = app.add_subcommand("subcube-scan", "find components that are whole subcubes");
  add_nk(scan, true);
  add_trials(scan);
  add_seed(scan);
  add_format(scan);
  add_out(scan);
  scan->add_flag("--plant", o.plant, "plant a k-dimensional subcube component in each trial");
  scan->add_option("--level", o.level, "number of fixed coordinates equal to 1 in the planted subcube")
      ->capture_default_str();

  auto* walk = app.add_subcommand("walk", "exact law of the distance walk and its bounds");
  walk->add_option("--n", o.n, "walk size")->required();
  walk->add_option("--horizon", o.horizon, "steps (default 2 n^2)");
  walk->add_option("--runs", o.runs, "Monte Carlo runs to compare with the exact law");
  add_seed(walk);
  add_format(walk);
  add_out(walk);

  auto* iso = app.add_subcommand("iso-check", "edge-isoperimetric inequality check");
  iso->add_option("--n", o.n, "cube dimension")->required();
  iso->add_option("--samples", o.samples, "random sets for n > 4")->capture_default_str();
  add_seed(iso);
  add_format(iso);
  add_out(iso);

  auto* sweep = app.add_subcommand("sweep", "connectivity rate across k");
  sweep->add_option("--n", o.n, "cube dimension")->required();
  sweep->add_option("--k-min", o.k_min, "smallest k")->capture_default_str();
  sweep->add_option("--k-max", o.k_max, "largest k (default n)");
  add_trials(sweep);
  add_seed(sweep);
  add_threads(sweep);
  add_format(sweep);
  add_out(sweep);

  auto* summ = app.add_subcommand("summarize", "summary table of JSONL trial records");
  summ->add_option("--input", o.input, "records file, or - for stdin")->required();
  add_seed(summ);
  add_out(summ);
  std::string summary_format = "csv";
  summ->add_option("--format", summary_format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "koutcube: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (cuts->parsed() && !removal_text.empty()) {
      o.removal = parse_vertex_list(removal_text);
      o.removal_given = true;
    }
    if (summ->parsed()) o.format = summary_format;
    if (sample->parsed()) cmd_sample(o, out);
    else if (comps->parsed()) cmd_components(o, out);
    else if (cycles->parsed()) cmd_cycles(o, out);
    else if (kconn->parsed()) cmd_kconn(o, out);
    else if (cuts->parsed()) cmd_cut_census(o, out);
    else if (scan->parsed()) cmd_subcube_scan(o, out);
    else if (walk->parsed()) cmd_walk(o, out);
    else if (iso->parsed()) cmd_iso_check(o, out);
    else if (sweep->parsed()) cmd_sweep(o, out);
    else if (summ->parsed()) cmd_summarize(o, out);
  } catch (const InvalidParameter& e) {
    err << "koutcube: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidSpec& e) {
    err << "koutcube: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "koutcube: " << e.what() << '\n';
    return kExitRefused;
  }
  return kExitOk;
}

}  // namespace koutcube::cli

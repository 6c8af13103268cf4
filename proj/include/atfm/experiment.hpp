#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "atfm/baselines.hpp"
#include "atfm/dynamics.hpp"
#include "atfm/generator.hpp"
#include "atfm/io.hpp"
#include "atfm/scenario.hpp"
#include "atfm/util.hpp"

namespace atfm {

struct MethodSpec {
  enum class Kind { dynamics, centralized, fcfs } kind = Kind::dynamics;
  Kappa kappa;  // dynamics only

  std::string name() const {
    switch (kind) {
      case Kind::dynamics: return "dynamics";
      case Kind::centralized: return "centralized";
      case Kind::fcfs: return "fcfs";
    }
    return "?";
  }
  std::string label() const {
    if (kind != Kind::dynamics) return name();
    return "dynamics_k" + detail::fmt_double(kappa.value);
  }
};

struct ExperimentConfig {
  // scenario source: a preset name or a scenario file
  std::string preset;
  std::uint64_t scenario_seed = 1;
  bool resample_scenarios = true;  // presets: derive a fresh instance per trial
  std::string scenario_file;
  int override_flights = -1;          // preset override, -1 keeps the preset value
  int override_capacity = -1;         // uniform capacity override
  double override_headroom = -1.0;    // headroom capacity override

  std::vector<MethodSpec> methods;
  int trials = 1;
  std::uint64_t base_seed = 1;
  std::string out_dir;  // empty: no files written
  GAConfig ga;
  AgentOrder order = AgentOrder::by_id;
  int max_rounds = 1000;
  BestResponseSolver solver = BestResponseSolver::ga;
  int threads = 1;
  bool write_traces = true;
  bool write_occupancy = true;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (methods.empty()) throw std::invalid_argument("experiment: no methods selected");
    if (preset.empty() == scenario_file.empty())
      throw std::invalid_argument("experiment: exactly one of preset or scenario file is required");
    ga.validate();
  }
};

struct MetricsRow {
  int trial = 0;
  std::string method;
  bool has_kappa = false;
  double kappa = 0.0;
  long long flights = 0;
  long long sectors = 0;
  int uniform_capacity = -1;  // -1: capacities are not uniform
  long long initial_overload = 0;
  long long final_overload = 0;
  bool reduction_defined = false;
  double reduction = 0.0;  // (initial - final) / initial
  bool has_rounds = false;
  int rounds = 0;
  int accepted_updates = 0;
  double total_wall_s = 0.0;
  bool has_per_agent = false;
  double per_agent_wall_s = 0.0;
  bool has_ttc = false;
  double time_to_centralized_s = 0.0;
};

namespace detail {

inline int uniform_capacity_of(const Scenario& s) {
  const int d = s.capacities.front();
  for (int c : s.capacities)
    if (c != d) return -1;
  return d;
}

inline std::string csv_opt(bool present, double value) {
  return present ? fmt_double(value) : std::string();
}

inline void write_occupancy_rows(std::ofstream& out, const Scenario& s, const ActionProfile& x,
                                 const std::string& method) {
  const LoadTable t = compute_loads(s, x);
  for (int sec = 0; sec < s.num_sectors(); ++sec)
    for (int b = 0; b < s.num_bins(); ++b)
      out << method << ',' << sec << ',' << b * s.bin_width << ',' << t.occ(sec, b) << '\n';
}

}  // namespace detail

// Deterministic columns only; see write_timings_csv for the wall-clock data.
inline void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "trial,method,kappa,n,m,D,initial_overload,final_overload,reduction,rounds,accepted_updates\n";
  for (const MetricsRow& r : rows) {
    out << r.trial << ',' << r.method << ',' << (r.has_kappa ? detail::fmt_double(r.kappa) : "")
        << ',' << r.flights << ',' << r.sectors << ','
        << (r.uniform_capacity >= 0 ? std::to_string(r.uniform_capacity) : "") << ','
        << r.initial_overload << ',' << r.final_overload << ','
        << detail::csv_opt(r.reduction_defined, r.reduction) << ','
        << (r.has_rounds ? std::to_string(r.rounds) : "") << ','
        << (r.has_rounds ? std::to_string(r.accepted_updates) : "") << '\n';
  }
}

// Wall-clock columns; contents vary run to run and are kept out of the
// deterministic metrics file.
inline void write_timings_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "trial,method,kappa,n,m,D,total_wall_s,per_agent_wall_s,time_to_centralized_s\n";
  for (const MetricsRow& r : rows) {
    out << r.trial << ',' << r.method << ',' << (r.has_kappa ? detail::fmt_double(r.kappa) : "")
        << ',' << r.flights << ',' << r.sectors << ','
        << (r.uniform_capacity >= 0 ? std::to_string(r.uniform_capacity) : "") << ','
        << detail::fmt_double(r.total_wall_s) << ','
        << detail::csv_opt(r.has_per_agent, r.per_agent_wall_s) << ','
        << detail::csv_opt(r.has_ttc, r.time_to_centralized_s) << '\n';
  }
}

// Divides every timing by the median total runtime of the reference method
// within its (n, m, D) group. Throws when a group has no reference rows.
inline std::vector<MetricsRow> normalize_times(std::vector<MetricsRow> rows,
                                               const std::string& reference) {
  struct Key {
    long long n, m;
    int d;
    bool operator<(const Key& o) const {
      if (n != o.n) return n < o.n;
      if (m != o.m) return m < o.m;
      return d < o.d;
    }
  };
  std::map<Key, std::vector<double>> ref_times;
  for (const MetricsRow& r : rows)
    if (r.method == reference)
      ref_times[{r.flights, r.sectors, r.uniform_capacity}].push_back(r.total_wall_s);

  std::map<Key, double> medians;
  for (auto& [key, times] : ref_times) {
    std::sort(times.begin(), times.end());
    const std::size_t k = times.size();
    medians[key] = (k % 2 == 1) ? times[k / 2] : 0.5 * (times[k / 2 - 1] + times[k / 2]);
  }

  for (MetricsRow& r : rows) {
    const Key key{r.flights, r.sectors, r.uniform_capacity};
    auto it = medians.find(key);
    if (it == medians.end())
      throw std::runtime_error("normalize_times: no '" + reference + "' rows in group n=" +
                               std::to_string(key.n) + " m=" + std::to_string(key.m) +
                               " D=" + std::to_string(key.d));
    const double med = it->second;
    if (med > 0.0) {
      r.total_wall_s /= med;
      if (r.has_per_agent) r.per_agent_wall_s /= med;
      if (r.has_ttc) r.time_to_centralized_s /= med;
    }
  }
  return rows;
}

// Runs every configured method on every trial from the shared zero-delay
// start profile. Trials are independent (derived seeds) and may execute
// concurrently; outputs are identical for any thread budget.
inline std::vector<MetricsRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  using clock = std::chrono::steady_clock;

  const bool from_file = !config.scenario_file.empty();
  Scenario file_scenario;
  if (from_file) file_scenario = load_scenario(config.scenario_file);

  if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

  struct TrialOutput {
    std::vector<MetricsRow> rows;
    std::string error;
  };
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(config.trials));

  auto run_trial = [&](int trial) {
    Scenario generated;
    const Scenario* scenario = &file_scenario;
    if (!from_file) {
      GenParams params = preset(config.preset);
      if (config.override_flights >= 0) params.num_flights = config.override_flights;
      if (config.override_capacity >= 1)
        params.capacity = CapacityRule::uniform(config.override_capacity);
      if (config.override_headroom > 0.0)
        params.capacity = CapacityRule::from_headroom(config.override_headroom);
      params.seed = config.resample_scenarios
                        ? derive_seed(config.base_seed, 0x7363656eull, static_cast<std::uint64_t>(trial))
                        : config.scenario_seed;
      generated = generate(params);
      scenario = &generated;
    }
    const Scenario& s = *scenario;
    const ActionProfile x0 = zero_profile(s);
    const long long initial = compute_loads(s, x0).total_overload;
    const int uniform_d = detail::uniform_capacity_of(s);

    struct MethodOutcome {
      ActionProfile profile;
      long long final_overload = 0;
      double wall = 0.0;
      Trace trace;
      bool has_trace = false;
    };
    std::vector<MethodOutcome> outcomes;

    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const MethodSpec& method = config.methods[mi];
      MethodOutcome out;
      const std::uint64_t method_seed =
          derive_seed(config.base_seed, 0x6d657468ull + mi, static_cast<std::uint64_t>(trial));
      if (method.kind == MethodSpec::Kind::dynamics) {
        RunConfig rc;
        rc.kappa = method.kappa;
        rc.ga = config.ga;
        rc.ga.seed = method_seed;
        rc.order = config.order;
        rc.max_rounds = config.max_rounds;
        rc.solver = config.solver;
        const auto t0 = clock::now();
        out.trace = run(s, x0, rc);
        out.wall = std::chrono::duration<double>(clock::now() - t0).count();
        out.profile = out.trace.terminal_profile;
        out.final_overload = out.trace.final_overload;
        out.has_trace = true;
      } else if (method.kind == MethodSpec::Kind::centralized) {
        GAConfig ga = config.ga;
        ga.seed = method_seed;
        const BaselineResult r = centralized(s, x0, ga);
        out.profile = r.profile;
        out.final_overload = r.total_overload_after;
        out.wall = r.wall_seconds;
      } else {
        const BaselineResult r = fcfs(s, x0);
        out.profile = r.profile;
        out.final_overload = r.total_overload_after;
        out.wall = r.wall_seconds;
      }
      // independent recount of the stored terminal profile
      const long long recount = compute_loads(s, out.profile).total_overload;
      if (recount != out.final_overload)
        throw std::logic_error("experiment: final overload does not match a recount of the stored profile");
      outcomes.push_back(std::move(out));
    }

    // centralized reference level for time-to-level, if present
    bool has_centralized = false;
    long long centralized_final = 0;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
      if (config.methods[mi].kind == MethodSpec::Kind::centralized) {
        has_centralized = true;
        centralized_final = outcomes[mi].final_overload;
      }

    TrialOutput& to = outputs[static_cast<std::size_t>(trial)];
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const MethodSpec& method = config.methods[mi];
      const MethodOutcome& out = outcomes[mi];
      MetricsRow row;
      row.trial = trial;
      row.method = method.name();
      row.flights = s.num_flights();
      row.sectors = s.num_sectors();
      row.uniform_capacity = uniform_d;
      row.initial_overload = initial;
      row.final_overload = out.final_overload;
      if (initial > 0) {
        row.reduction_defined = true;
        row.reduction = static_cast<double>(initial - out.final_overload) / static_cast<double>(initial);
      }
      row.total_wall_s = out.wall;
      if (method.kind == MethodSpec::Kind::dynamics) {
        row.has_kappa = true;
        row.kappa = method.kappa.value;
        row.has_rounds = true;
        row.rounds = out.trace.rounds_used;
        row.accepted_updates = out.trace.accepted_steps;
        row.has_per_agent = true;
        row.per_agent_wall_s = out.wall / static_cast<double>(s.num_sectors());
        if (has_centralized) {
          if (initial <= centralized_final) {
            row.has_ttc = true;
            row.time_to_centralized_s = 0.0;
          } else {
            double elapsed = 0.0;
            for (const TraceStep& step : out.trace.steps) {
              elapsed += step.duration_seconds;
              if (step.total_overload_after <= centralized_final) {
                row.has_ttc = true;
                row.time_to_centralized_s = elapsed;
                break;
              }
            }
          }
        }
      }
      to.rows.push_back(std::move(row));
    }

    if (!config.out_dir.empty()) {
      const std::filesystem::path dir(config.out_dir);
      if (config.write_occupancy) {
        std::ofstream occ(dir / ("occupancy_trial" + std::to_string(trial) + ".csv"));
        occ << "method,sector,bin_start_minute,count\n";
        detail::write_occupancy_rows(occ, s, x0, "initial");
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
          detail::write_occupancy_rows(occ, s, outcomes[mi].profile, config.methods[mi].label());
      }
      if (config.write_traces) {
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
          if (!outcomes[mi].has_trace) continue;
          const std::string stem =
              "trace_trial" + std::to_string(trial) + "_" + config.methods[mi].label();
          write_trace_json(outcomes[mi].trace, (dir / (stem + ".json")).string());
          write_trace_csv(outcomes[mi].trace, (dir / (stem + ".csv")).string());
        }
      }
    }
  };

  const int workers = std::max(1, std::min(config.threads, config.trials));
  if (workers == 1) {
    for (int t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) {
          try {
            run_trial(t);
          } catch (const std::exception& e) {
            outputs[static_cast<std::size_t>(t)].error = e.what();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& out : outputs)
      if (!out.error.empty()) throw std::runtime_error("experiment trial failed: " + out.error);
  }

  std::vector<MetricsRow> rows;
  for (const auto& out : outputs)
    for (const MetricsRow& r : out.rows) rows.push_back(r);

  if (!config.out_dir.empty()) {
    const std::filesystem::path dir(config.out_dir);
    write_metrics_csv(rows, (dir / "metrics.csv").string());
    write_timings_csv(rows, (dir / "timings.csv").string());
  }
  return rows;
}

}  // namespace atfm

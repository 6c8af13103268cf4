// Command-line front end: scenario generation, experiment batches, the
// property verifier, the scalability sweep, and timing normalization.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atfm/experiment.hpp"
#include "atfm/generator.hpp"
#include "atfm/io.hpp"
#include "atfm/oracle.hpp"

namespace {

using namespace atfm;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Kappa parse_kappa(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const long long num = std::stoll(text.substr(0, slash));
    const long long den = std::stoll(text.substr(slash + 1));
    return Kappa::ratio(num, den);
  }
  return Kappa(std::stod(text));
}

int env_threads() {
  const char* v = std::getenv("ATFM_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n >= 1 ? n : 1;
}

std::vector<MethodSpec> build_methods(const std::string& methods_csv, const std::string& kappas_csv) {
  std::vector<MethodSpec> specs;
  for (const std::string& m : split_list(methods_csv)) {
    if (m == "dynamics") {
      for (const std::string& k : split_list(kappas_csv))
        specs.push_back({MethodSpec::Kind::dynamics, parse_kappa(k)});
    } else if (m == "centralized") {
      specs.push_back({MethodSpec::Kind::centralized, Kappa{}});
    } else if (m == "fcfs") {
      specs.push_back({MethodSpec::Kind::fcfs, Kappa{}});
    } else {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
  }
  return specs;
}

std::vector<std::uint64_t> battery(int count, std::uint64_t first = 1) {
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < count; ++k) seeds.push_back(first + static_cast<std::uint64_t>(k));
  return seeds;
}

void print_report(const oracle::VerifierReport& r) {
  std::cout << (r.passed() ? "[PASS] " : "[FAIL] ") << r.check << ": " << r.instances
            << " instances, " << r.deviations << " checks";
  if (!r.note.empty()) std::cout << " (" << r.note << ")";
  std::cout << "\n";
  for (std::size_t k = 0; k < r.violations.size() && k < 5; ++k)
    std::cout << "       seed " << r.violations[k].seed << ": " << r.violations[k].detail << "\n";
}

int cmd_generate(const std::string& preset_name, std::uint64_t seed, const std::string& out,
                 int flights, int capacity, double headroom, const std::string& csv_in,
                 int horizon, int bin_width, const std::string& actions_csv, int tiny_bins) {
  Scenario s;
  if (!csv_in.empty()) {
    std::vector<int> action_set;
    for (const std::string& a : split_list(actions_csv)) action_set.push_back(std::stoi(a));
    // sector count inferred from the plan; uniform capacity applies everywhere
    Scenario probe = scenario_from_csv(csv_in, std::vector<int>(256, std::max(1, capacity)),
                                       horizon, bin_width, action_set);
    int max_sector = 0;
    for (const Flight& f : probe.flights) {
      max_sector = std::max(max_sector, f.owner);
      for (const auto& seg : f.segments) max_sector = std::max(max_sector, seg.sector);
    }
    s = scenario_from_csv(csv_in, std::vector<int>(static_cast<std::size_t>(max_sector + 1),
                                                   std::max(1, capacity)),
                          horizon, bin_width, action_set);
  } else if (preset_name == "tiny") {
    s = random_tiny(seed, tiny_bins);
  } else {
    GenParams params = preset(preset_name);
    params.seed = seed;
    if (flights >= 0) params.num_flights = flights;
    if (capacity >= 1) params.capacity = CapacityRule::uniform(capacity);
    if (headroom > 0.0) params.capacity = CapacityRule::from_headroom(headroom);
    s = generate(params);
  }
  save_scenario(s, out);
  const LoadTable t = compute_loads(s, zero_profile(s));
  std::cout << "wrote " << out << ": " << s.num_flights() << " flights, " << s.num_sectors()
            << " sectors, " << s.num_bins() << " bins, zero-delay overload " << t.total_overload
            << "\n";
  return 0;
}

int cmd_verify(int instances, const std::string& out_json, const std::string& counterexample_out) {
  const auto seeds = battery(instances);
  std::vector<oracle::VerifierReport> reports;

  reports.push_back(oracle::check_loads_differential(battery(std::min(instances, 40))));
  for (const auto& [num, den] : {std::pair<long long, long long>{1, 4}, {1, 2}, {3, 4}}) {
    auto r = oracle::check_exact_potential(seeds, 1, Kappa::ratio(num, den),
                                           oracle::PotentialPremise::fixed_overload_set);
    r.check += "-fixed-overload-set-k" + std::to_string(num) + "of" + std::to_string(den);
    reports.push_back(std::move(r));
  }
  for (int bins : {1, 3}) {
    auto r = oracle::check_exact_potential(seeds, bins, Kappa::ratio(1, 1),
                                           oracle::PotentialPremise::unconditional);
    r.check += "-k1-unconditional-" + std::to_string(bins) + "bin";
    reports.push_back(std::move(r));
  }
  for (const auto& [num, den] : {std::pair<long long, long long>{1, 4}, {1, 2}, {3, 4}}) {
    auto r = oracle::check_exact_potential(seeds, 3, Kappa::ratio(num, den),
                                           oracle::PotentialPremise::fixed_resource_set);
    r.check += "-fixed-resource-set-3bin-k" + std::to_string(num) + "of" + std::to_string(den);
    reports.push_back(std::move(r));
  }

  const auto adjudication = oracle::adjudicate_kappa_zero(seeds);
  reports.push_back(adjudication.report);
  if (!counterexample_out.empty()) {
    std::ofstream out(counterexample_out);
    out << oracle::adjudication_to_json(adjudication).dump(2) << '\n';
  }

  for (int bins : {1, 3}) {
    auto r = oracle::check_self_prioritization(seeds, bins);
    r.check += "-" + std::to_string(bins) + "bin";
    reports.push_back(std::move(r));
  }
  for (int bins : {1, 3}) {
    auto r = oracle::check_feasible_global_min(seeds, bins);
    r.check += "-" + std::to_string(bins) + "bin";
    reports.push_back(std::move(r));
  }

  // terminal profiles of exhaustive-best-response runs are restricted Nash
  {
    oracle::VerifierReport nash;
    nash.check = "restricted-nash-terminal";
    oracle::VerifierReport chain;
    chain.check = "trace-lemmas-batch";
    const double kappas[] = {0.0, 1e-6, 0.5, 1.0};
    for (std::uint64_t seed : battery(std::min(instances, 50))) {
      const Scenario s = random_tiny(seed, 3);
      for (double kv : kappas) {
        RunConfig rc;
        rc.kappa = Kappa(kv);
        rc.ga.seed = derive_seed(seed, 0x72756eull);
        rc.solver = BestResponseSolver::exhaustive;
        rc.max_rounds = 10 * s.num_sectors() * static_cast<int>(oracle::joint_space_size(s, 1 << 20));
        const Trace trace = run(s, zero_profile(s), rc);
        ++nash.instances;
        ++chain.instances;
        if (!oracle::check_nash(s, trace.terminal_profile, rc.kappa, true))
          nash.violations.push_back({seed, "terminal profile admits an improving deviation (kappa=" +
                                               std::to_string(kv) + ")"});
        const auto cr = oracle::check_trace_lemmas(trace);
        chain.deviations += cr.deviations;
        for (const auto& v : cr.violations) chain.violations.push_back({seed, v.detail});
      }
    }
    reports.push_back(std::move(nash));
    reports.push_back(std::move(chain));
  }

  {
    const auto ga = oracle::check_ga_matches_exhaustive(battery(100), GAConfig{});
    oracle::VerifierReport r;
    r.check = "ga-matches-exhaustive";
    r.instances = ga.runs;
    r.note = "matched " + std::to_string(ga.matched) + "/" + std::to_string(ga.runs);
    if (ga.def3_violations > 0)
      r.violations.push_back({0, std::to_string(ga.def3_violations) + " runs created new overload"});
    if (ga.worsened > 0)
      r.violations.push_back({0, std::to_string(ga.worsened) + " runs worsened the incumbent"});
    if (ga.matched * 100 < ga.runs * 95)
      r.violations.push_back({0, "GA matched the exhaustive optimum in fewer than 95% of runs"});
    reports.push_back(std::move(r));
  }

  bool all_passed = true;
  json j = json::array();
  for (const auto& r : reports) {
    print_report(r);
    j.push_back(oracle::report_to_json(r));
    all_passed = all_passed && r.passed();
  }
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    out << j.dump(2) << '\n';
    std::cout << "report written to " << out_json << "\n";
  }
  std::cout << (all_passed ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sector overload mitigation: best-response dynamics, baselines, verifier"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a scenario file");
  std::string gen_preset = "brest-like", gen_out = "scenario.json", gen_csv, gen_actions = "0,5,10,15,20,25,30";
  std::uint64_t gen_seed = 1;
  int gen_flights = -1, gen_capacity = -1, gen_horizon = 1440, gen_bin = 15, gen_tiny_bins = 1;
  double gen_headroom = -1.0;
  gen->add_option("--preset", gen_preset, "Preset name (brest-like, brest-like-d7, brest-like-headroom, europe-like, tiny)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output scenario JSON path")->required();
  gen->add_option("--n", gen_flights, "Override flight count");
  gen->add_option("--capacity", gen_capacity, "Uniform capacity override (also used for CSV import)");
  gen->add_option("--headroom", gen_headroom, "Headroom capacity rule override (fraction of zero-delay peak)");
  gen->add_option("--from-csv", gen_csv, "Build the scenario from a flight-plan CSV instead of a preset");
  gen->add_option("--horizon", gen_horizon, "Horizon minutes (CSV import)");
  gen->add_option("--bin-width", gen_bin, "Bin width minutes (CSV import)");
  gen->add_option("--action-set", gen_actions, "Comma-separated delay menu (CSV import)");
  gen->add_option("--tiny-bins", gen_tiny_bins, "Bin count for the tiny preset (1 or 3)");

  // run
  auto* runc = app.add_subcommand("run", "Run an experiment batch");
  std::string run_preset, run_file, run_methods = "dynamics,centralized,fcfs";
  std::string run_kappas = "0,1e-6,0.5,1", run_out = "out";
  std::uint64_t run_seed = 1, run_scn_seed = 1;
  int run_trials = 1, run_threads = 0, run_max_rounds = 1000;
  int run_flights = -1, run_capacity = -1;
  double run_headroom = -1.0;
  bool run_no_resample = false, run_exhaustive = false, run_shuffle = false;
  bool run_no_traces = false, run_no_occupancy = false;
  GAConfig run_ga;
  runc->add_option("--preset", run_preset, "Scenario preset");
  runc->add_option("--scenario", run_file, "Scenario JSON file");
  runc->add_option("--scenario-seed", run_scn_seed, "Seed when --no-resample keeps one instance");
  runc->add_flag("--no-resample", run_no_resample, "Use one preset instance for all trials");
  runc->add_option("--n", run_flights, "Preset flight-count override");
  runc->add_option("--capacity", run_capacity, "Preset uniform-capacity override");
  runc->add_option("--headroom", run_headroom, "Preset headroom-capacity override");
  runc->add_option("--methods", run_methods, "Comma list of dynamics,centralized,fcfs");
  runc->add_option("--kappas", run_kappas, "Comma list of cooperativeness values for dynamics (decimals or a/b)");
  runc->add_option("--trials", run_trials, "Monte Carlo trials");
  runc->add_option("--base-seed", run_seed, "Base seed for derived streams");
  runc->add_option("--out-dir", run_out, "Output directory");
  runc->add_option("--threads", run_threads, "Worker threads (default: ATFM_THREADS or 1)");
  runc->add_option("--max-rounds", run_max_rounds, "Round safeguard");
  runc->add_flag("--exhaustive", run_exhaustive, "Exact best responses instead of the GA");
  runc->add_flag("--shuffle-agents", run_shuffle, "Shuffle agent order each round (seeded)");
  runc->add_flag("--no-traces", run_no_traces, "Skip trace files");
  runc->add_flag("--no-occupancy", run_no_occupancy, "Skip occupancy series files");
  runc->add_option("--pop", run_ga.population_size, "GA population size");
  runc->add_option("--crossover", run_ga.crossover_rate, "GA crossover rate");
  runc->add_option("--mutation", run_ga.mutation_rate, "GA per-gene mutation rate");
  runc->add_option("--generations", run_ga.max_generations, "GA generation cap");
  runc->add_option("--stall", run_ga.stall_generations, "GA early-stop stall window");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the brute-force property checks");
  int ver_instances = 120;
  std::string ver_json, ver_ce = "kappa0_adjudication.json";
  ver->add_option("--instances", ver_instances, "Battery size");
  ver->add_option("--out", ver_json, "Machine-readable report path");
  ver->add_option("--adjudication-out", ver_ce, "Adjudication record path");

  // bench
  auto* bench = app.add_subcommand("bench", "Scalability sweep over flight counts");
  std::string bench_sizes = "10,100,1000,5000", bench_out = "bench_out";
  std::string bench_methods = "dynamics,centralized", bench_kappas = "1";
  int bench_trials = 2, bench_threads = 0;
  std::uint64_t bench_seed = 1;
  bench->add_option("--sizes", bench_sizes, "Comma list of flight counts");
  bench->add_option("--trials", bench_trials, "Trials per size");
  bench->add_option("--methods", bench_methods, "Methods to time");
  bench->add_option("--kappas", bench_kappas, "Cooperativeness values for dynamics");
  bench->add_option("--base-seed", bench_seed, "Base seed");
  bench->add_option("--out-dir", bench_out, "Output directory");
  bench->add_option("--threads", bench_threads, "Worker threads");

  // export
  auto* exp = app.add_subcommand("export", "Normalize timing rows by a reference method");
  std::string exp_in, exp_out = "normalized.csv", exp_ref = "centralized", exp_metrics;
  exp->add_option("--timings", exp_in, "timings.csv produced by run/bench")->required();
  exp->add_option("--reference", exp_ref, "Reference method");
  exp->add_option("--out", exp_out, "Normalized CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(gen_preset, gen_seed, gen_out, gen_flights, gen_capacity, gen_headroom,
                          gen_csv, gen_horizon, gen_bin, gen_actions, gen_tiny_bins);

    if (runc->parsed()) {
      ExperimentConfig config;
      config.preset = run_preset;
      config.scenario_file = run_file;
      config.scenario_seed = run_scn_seed;
      config.resample_scenarios = !run_no_resample;
      config.override_flights = run_flights;
      config.override_capacity = run_capacity;
      config.override_headroom = run_headroom;
      config.methods = build_methods(run_methods, run_kappas);
      config.trials = run_trials;
      config.base_seed = run_seed;
      config.out_dir = run_out;
      config.ga = run_ga;
      config.order = run_shuffle ? AgentOrder::seeded_shuffle_per_round : AgentOrder::by_id;
      config.max_rounds = run_max_rounds;
      config.solver = run_exhaustive ? BestResponseSolver::exhaustive : BestResponseSolver::ga;
      config.threads = run_threads >= 1 ? run_threads : env_threads();
      config.write_traces = !run_no_traces;
      config.write_occupancy = !run_no_occupancy;
      const auto rows = run_experiment(config);
      std::cout << "wrote " << rows.size() << " metric rows to " << run_out << "/metrics.csv\n";
      return 0;
    }

    if (ver->parsed()) return cmd_verify(ver_instances, ver_json, ver_ce);

    if (bench->parsed()) {
      std::vector<MetricsRow> all;
      std::filesystem::create_directories(bench_out);
      for (const std::string& size : split_list(bench_sizes)) {
        ExperimentConfig config;
        config.preset = "europe-like";
        config.override_flights = std::stoi(size);
        config.methods = build_methods(bench_methods, bench_kappas);
        config.trials = bench_trials;
        config.base_seed = bench_seed;
        config.ga = GAConfig{};
        config.threads = bench_threads >= 1 ? bench_threads : env_threads();
        config.write_traces = false;
        config.write_occupancy = false;
        const auto rows = run_experiment(config);
        all.insert(all.end(), rows.begin(), rows.end());
        std::cout << "n=" << size << ": " << rows.size() << " rows\n";
      }
      write_metrics_csv(all, bench_out + "/metrics.csv");
      write_timings_csv(all, bench_out + "/timings.csv");
      std::cout << "wrote " << bench_out << "/metrics.csv and timings.csv\n";
      return 0;
    }

    if (exp->parsed()) {
      // read timings.csv back into rows
      std::ifstream in(exp_in);
      if (!in) throw std::runtime_error("cannot read " + exp_in);
      std::vector<MetricsRow> rows;
      std::string line;
      bool header = true;
      while (std::getline(in, line)) {
        if (header) {
          header = false;
          continue;
        }
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        cells.resize(9);
        MetricsRow r;
        r.trial = std::stoi(cells[0]);
        r.method = cells[1];
        r.has_kappa = !cells[2].empty();
        if (r.has_kappa) r.kappa = std::stod(cells[2]);
        r.flights = std::stoll(cells[3]);
        r.sectors = std::stoll(cells[4]);
        r.uniform_capacity = cells[5].empty() ? -1 : std::stoi(cells[5]);
        r.total_wall_s = std::stod(cells[6]);
        r.has_per_agent = !cells[7].empty();
        if (r.has_per_agent) r.per_agent_wall_s = std::stod(cells[7]);
        r.has_ttc = !cells[8].empty();
        if (r.has_ttc) r.time_to_centralized_s = std::stod(cells[8]);
        rows.push_back(std::move(r));
      }
      const auto normalized = normalize_times(rows, exp_ref);
      write_timings_csv(normalized, exp_out);
      std::cout << "wrote " << exp_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

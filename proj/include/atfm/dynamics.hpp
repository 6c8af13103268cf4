#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "atfm/ga.hpp"
#include "atfm/game.hpp"
#include "atfm/loads.hpp"
#include "atfm/scenario.hpp"
#include "atfm/util.hpp"

namespace atfm {

enum class BestResponseSolver { ga, exhaustive };
enum class AgentOrder { by_id, seeded_shuffle_per_round };
enum class TerminationReason { feasible_found, no_improvement_round, step_limit };

inline std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::feasible_found: return "feasible_found";
    case TerminationReason::no_improvement_round: return "no_improvement_round";
    case TerminationReason::step_limit: return "step_limit";
  }
  return "unknown";
}

struct TraceStep {
  int round = 0;
  SectorId agent = 0;
  bool accepted = false;
  double cost_before = 0.0;
  double cost_after = 0.0;
  double potential_before = 0.0;
  double potential_after = 0.0;
  std::vector<SectorId> overloaded_before;
  std::vector<SectorId> overloaded_after;
  long long total_overload_after = 0;
  double duration_seconds = 0.0;
};

struct Trace {
  double kappa = 0.0;
  BestResponseSolver solver = BestResponseSolver::ga;
  std::vector<TraceStep> steps;
  ActionProfile terminal_profile;
  TerminationReason reason = TerminationReason::no_improvement_round;
  long long initial_overload = 0;
  long long final_overload = 0;
  int rounds_used = 0;
  int accepted_steps = 0;
};

struct RunConfig {
  Kappa kappa;
  GAConfig ga;
  AgentOrder order = AgentOrder::by_id;
  int max_rounds = 1000;
  BestResponseSolver solver = BestResponseSolver::ga;
  long long exhaustive_cap = 1LL << 20;

  void validate() const {
    ga.validate();
    if (max_rounds < 1) throw std::invalid_argument("run: max_rounds must be >= 1");
  }
};

namespace detail {

// Evaluates candidate delay vectors for one sector's flights against the
// fixed background of everyone else. The background occupancy is built once;
// each evaluation adds the agent's flights, reads the loads, and undoes the
// edit, so no per-candidate allocation or copying happens.
class BestResponseEvaluator {
 public:
  BestResponseEvaluator(const Scenario& s, const ActionProfile& x, SectorId agent,
                        const Kappa& kappa)
      : scenario_(s), agent_(agent), kappa_(kappa) {
    validate_profile(s, x);
    for (int f = 0; f < s.num_flights(); ++f)
      if (s.flights[static_cast<std::size_t>(f)].owner == agent) agent_flights_.push_back(f);
    table_ = empty_load_table(s);
    for (int f = 0; f < s.num_flights(); ++f) {
      if (s.flights[static_cast<std::size_t>(f)].owner == agent) continue;
      add_flight(table_, s, f, s.delay_of(x[static_cast<std::size_t>(f)]));
    }
    LoadTable full = table_;
    for (int f : agent_flights_)
      add_flight(full, s, f, s.delay_of(x[static_cast<std::size_t>(f)]));
    feasible_before_.resize(static_cast<std::size_t>(s.num_sectors()));
    for (int i = 0; i < s.num_sectors(); ++i)
      feasible_before_[static_cast<std::size_t>(i)] =
          full.sector_overload[static_cast<std::size_t>(i)] == 0;
  }

  const std::vector<int>& agent_flights() const { return agent_flights_; }

  // Cost of the candidate, or infinity when it would overload a sector that
  // is currently feasible.
  double evaluate(const Chromosome& delays_idx) {
    for (std::size_t k = 0; k < agent_flights_.size(); ++k)
      add_flight(table_, scenario_, agent_flights_[k], scenario_.delay_of(delays_idx[k]));
    bool ok = true;
    for (int i = 0; i < scenario_.num_sectors() && ok; ++i)
      if (feasible_before_[static_cast<std::size_t>(i)] &&
          table_.sector_overload[static_cast<std::size_t>(i)] > 0)
        ok = false;
    const double value = ok ? cost_from_loads(table_, agent_, kappa_) : infeasible_fitness();
    for (std::size_t k = 0; k < agent_flights_.size(); ++k)
      remove_flight(table_, scenario_, agent_flights_[k], scenario_.delay_of(delays_idx[k]));
    return value;
  }

 private:
  const Scenario& scenario_;
  SectorId agent_;
  Kappa kappa_;
  std::vector<int> agent_flights_;
  std::vector<char> feasible_before_;
  LoadTable table_;
};

inline ActionProfile with_agent_genes(const ActionProfile& x, const std::vector<int>& flights,
                                      const Chromosome& genes) {
  ActionProfile out = x;
  for (std::size_t k = 0; k < flights.size(); ++k)
    out[static_cast<std::size_t>(flights[k])] = genes[k];
  return out;
}

}  // namespace detail

// GA approximation of the restricted best response of one sector: minimizes
// that sector's cost over its own flights' delays, never creating overload in
// a currently feasible sector, never returning anything worse than x.
inline ActionProfile best_response(const Scenario& s, const ActionProfile& x, SectorId agent,
                                   const Kappa& kappa, const GAConfig& ga) {
  if (agent < 0 || agent >= s.num_sectors())
    throw std::invalid_argument("best_response: sector id out of range");
  detail::BestResponseEvaluator eval(s, x, agent, kappa);
  if (eval.agent_flights().empty()) return x;

  Chromosome incumbent;
  for (int f : eval.agent_flights()) incumbent.push_back(x[static_cast<std::size_t>(f)]);
  const std::vector<int> arities(incumbent.size(), s.num_actions());
  const double incumbent_cost = eval.evaluate(incumbent);
  const GAResult r = minimize(
      arities, [&](const Chromosome& c) { return eval.evaluate(c); }, incumbent, ga);
  if (!(r.best_fitness < incumbent_cost)) return x;  // keep the schedule on ties
  return detail::with_agent_genes(x, eval.agent_flights(), r.best);
}

// Exact restricted best response by enumeration of the agent's joint delay
// space. Ties resolve to the lexicographically smallest delay vector.
// Refuses spaces larger than `cap`.
inline ActionProfile exhaustive_best_response(const Scenario& s, const ActionProfile& x,
                                              SectorId agent, const Kappa& kappa,
                                              long long cap = 1LL << 20) {
  if (agent < 0 || agent >= s.num_sectors())
    throw std::invalid_argument("exhaustive_best_response: sector id out of range");
  detail::BestResponseEvaluator eval(s, x, agent, kappa);
  const std::size_t k = eval.agent_flights().size();
  if (k == 0) return x;

  long long space = 1;
  for (std::size_t g = 0; g < k; ++g) {
    space *= s.num_actions();
    if (space > cap)
      throw std::runtime_error("exhaustive_best_response: joint action space exceeds cap " +
                               std::to_string(cap));
  }

  Chromosome genes(k, 0);
  Chromosome best_genes;
  double best_value = infeasible_fitness();
  bool exhausted = false;
  while (!exhausted) {
    const double v = eval.evaluate(genes);
    if (v < best_value) {
      best_value = v;
      best_genes = genes;
    }
    std::size_t g = k;  // advance odometer, rightmost gene fastest
    while (true) {
      if (g == 0) {
        exhausted = true;
        break;
      }
      --g;
      if (++genes[g] < s.num_actions()) break;
      genes[g] = 0;
    }
  }
  // x itself is always a feasible candidate, so a best was found.
  return detail::with_agent_genes(x, eval.agent_flights(), best_genes);
}

// Sequential best-response dynamics: sectors take turns, an update is kept
// only if it strictly lowers the updating sector's cost, and the loop stops
// on a feasible schedule, on a full round without any accepted update, or at
// the max_rounds safeguard.
inline Trace run(const Scenario& s, const ActionProfile& x0, const RunConfig& config) {
  config.validate();
  validate_profile(s, x0);
  using clock = std::chrono::steady_clock;

  Trace trace;
  trace.kappa = config.kappa.value;
  trace.solver = config.solver;

  ActionProfile x = x0;
  LoadTable loads = compute_loads(s, x);
  trace.initial_overload = loads.total_overload;

  std::vector<SectorId> order(static_cast<std::size_t>(s.num_sectors()));
  for (int i = 0; i < s.num_sectors(); ++i) order[static_cast<std::size_t>(i)] = i;
  Rng order_rng(derive_seed(config.ga.seed, 0x6f72646572ull));

  bool done = false;
  for (int round = 1; round <= config.max_rounds && !done; ++round) {
    trace.rounds_used = round;
    bool improved = false;
    if (config.order == AgentOrder::seeded_shuffle_per_round) order_rng.shuffle(order);

    for (SectorId agent : order) {
      const auto t0 = clock::now();
      TraceStep step;
      step.round = round;
      step.agent = agent;
      step.cost_before = cost_from_loads(loads, agent, config.kappa);
      step.potential_before = potential(s, x, config.kappa);
      step.overloaded_before = loads.overloaded_sectors;

      ActionProfile candidate;
      if (step.cost_before == 0.0) {
        candidate = x;  // cost is nonnegative, nothing to improve
      } else if (config.solver == BestResponseSolver::exhaustive) {
        candidate = exhaustive_best_response(s, x, agent, config.kappa, config.exhaustive_cap);
      } else {
        GAConfig ga = config.ga;
        ga.seed = derive_seed(config.ga.seed, static_cast<std::uint64_t>(round),
                              static_cast<std::uint64_t>(agent));
        candidate = best_response(s, x, agent, config.kappa, ga);
      }

      LoadTable cand_loads = compute_loads(s, candidate);
      const double cand_cost = cost_from_loads(cand_loads, agent, config.kappa);
      step.accepted = cand_cost < step.cost_before;
      if (step.accepted) {
        x = candidate;
        loads = std::move(cand_loads);
        improved = true;
        ++trace.accepted_steps;
      }
      step.cost_after = step.accepted ? cand_cost : step.cost_before;
      step.potential_after = potential(s, x, config.kappa);
      step.overloaded_after = loads.overloaded_sectors;
      step.total_overload_after = loads.total_overload;
      step.duration_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      trace.steps.push_back(std::move(step));

      if (loads.total_overload == 0) {
        trace.reason = TerminationReason::feasible_found;
        done = true;
        break;
      }
    }
    if (!done && !improved) {
      trace.reason = TerminationReason::no_improvement_round;
      done = true;
    }
  }
  if (!done) trace.reason = TerminationReason::step_limit;

  trace.terminal_profile = x;
  trace.final_overload = loads.total_overload;
  return trace;
}

}  // namespace atfm

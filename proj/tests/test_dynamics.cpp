#include <catch2/catch_amalgamated.hpp>

#include "atfm/dynamics.hpp"
#include "atfm/generator.hpp"
#include "atfm/oracle.hpp"
#include "helpers.hpp"

using namespace atfm;

namespace {

GAConfig seeded_ga(std::uint64_t seed) {
  GAConfig ga;
  ga.seed = seed;
  return ga;
}

// Sector 0 owns a harmless flight and one that enters sector 1 when delayed;
// sector 1 sits exactly at capacity later in the day. Clearing sector 0 by
// delaying flight 1 would overload sector 1, so the restricted best response
// must delay flight 0 instead.
Scenario restriction_case() {
  Scenario s;
  s.capacities = {1, 1};
  s.horizon = 20;
  s.bin_width = 5;
  s.action_set = {0, 5};
  s.flights = {
      {0, 0, 0, {{0, 0, 5}}},
      {1, 0, 0, {{0, 0, 5}, {1, 5, 10}}},
      {2, 1, 0, {{1, 10, 15}}},
  };
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("best response with no controlled flights returns the profile", "[dynamics]") {
  Scenario s = test::tiny1();  // sector 1 owns nothing
  REQUIRE(best_response(s, {0, 0}, 1, Kappa(0.5), seeded_ga(1)) == ActionProfile{0, 0});
  REQUIRE(exhaustive_best_response(s, {0, 0}, 1, Kappa(0.5)) == ActionProfile{0, 0});
}

TEST_CASE("tiny1 best response clears the overload", "[dynamics]") {
  const Scenario s = test::tiny1();
  const Kappa k0(0.0);

  const ActionProfile exact = exhaustive_best_response(s, {0, 0}, 0, k0);
  REQUIRE(exact == ActionProfile{0, 1});  // lexicographically first optimum
  REQUIRE(cost(s, exact, 0, k0) == 0.0);

  const ActionProfile ga = best_response(s, {0, 0}, 0, k0, seeded_ga(2));
  REQUIRE(cost(s, ga, 0, k0) == 0.0);
}

TEST_CASE("feasible start is left untouched", "[dynamics]") {
  const Scenario s = test::tiny1();
  REQUIRE(best_response(s, {0, 1}, 0, Kappa(1.0), seeded_ga(3)) == ActionProfile{0, 1});
}

TEST_CASE("exhaustive best response breaks ties toward zero delay", "[dynamics]") {
  Scenario s;
  s.capacities = {5};
  s.horizon = 15;
  s.bin_width = 5;
  s.action_set = {0, 5};
  s.flights = {{0, 0, 0, {{0, 0, 5}}}};
  s.validate();
  // no overload either way; both delays cost 0
  REQUIRE(exhaustive_best_response(s, {1}, 0, Kappa(0.5)) == ActionProfile{0});
}

TEST_CASE("exhaustive best response refuses oversized spaces", "[dynamics]") {
  const Scenario s = test::tiny1();
  REQUIRE_THROWS_AS(exhaustive_best_response(s, {0, 0}, 0, Kappa(0.0), 3), std::runtime_error);
}

TEST_CASE("restricted best response avoids creating new overload", "[dynamics]") {
  const Scenario s = restriction_case();
  const ActionProfile x0 = {0, 0, 0};
  const Kappa k0(0.0);

  // unconstrained optimum would delay flight 1, overloading sector 1
  double best_unconstrained = cost(s, x0, 0, k0);
  ActionProfile best_profile = x0;
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      const ActionProfile cand = {a, b, 0};
      if (cost(s, cand, 0, k0) < best_unconstrained) {
        best_unconstrained = cost(s, cand, 0, k0);
        best_profile = cand;
      }
    }
  REQUIRE(best_profile == ActionProfile{0, 1, 0});
  REQUIRE_FALSE(new_overload_set(s, x0, best_profile).empty());

  const ActionProfile restricted = exhaustive_best_response(s, x0, 0, k0);
  REQUIRE(restricted == ActionProfile{1, 0, 0});
  REQUIRE(new_overload_set(s, x0, restricted).empty());
  REQUIRE(cost(s, restricted, 0, k0) == 0.0);
}

TEST_CASE("run exits immediately on a feasible start", "[dynamics]") {
  const Scenario s = test::tiny1();
  RunConfig rc;
  rc.kappa = Kappa(1.0);
  rc.ga = seeded_ga(4);
  const Trace t = run(s, {0, 1}, rc);
  REQUIRE(t.reason == TerminationReason::feasible_found);
  REQUIRE(t.accepted_steps == 0);
  REQUIRE(t.steps.size() == 1);
  REQUIRE(t.final_overload == 0);
}

TEST_CASE("tiny1 run reaches a feasible schedule", "[dynamics]") {
  const Scenario s = test::tiny1();
  RunConfig rc;
  rc.kappa = Kappa(1.0);
  rc.ga = seeded_ga(5);
  const Trace t = run(s, {0, 0}, rc);
  REQUIRE(t.final_overload == 0);
  REQUIRE(t.reason == TerminationReason::feasible_found);
  REQUIRE(compute_loads(s, t.terminal_profile).total_overload == t.final_overload);
}

TEST_CASE("round safeguard is flagged, not silent", "[dynamics]") {
  Scenario s;
  s.capacities = {1, 1};
  s.horizon = 15;
  s.bin_width = 5;
  s.action_set = {0, 5};
  for (int f = 0; f < 3; ++f) s.flights.push_back({f, 0, 0, {{0, 0, 5}}});
  s.validate();
  RunConfig rc;
  rc.kappa = Kappa(0.0);
  rc.ga = seeded_ga(6);
  rc.solver = BestResponseSolver::exhaustive;
  rc.max_rounds = 1;  // needs a second round to conclude no improvement remains
  const Trace t = run(s, {0, 0, 0}, rc);
  REQUIRE(t.reason == TerminationReason::step_limit);
  REQUIRE(t.final_overload == 1);  // three flights into two bins of capacity one
}

TEST_CASE("exhaustive-mode runs terminate at restricted Nash points", "[dynamics]") {
  const double kappas[] = {0.0, 1e-6, 0.5, 1.0};
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const Scenario s = random_tiny(seed, 3);
    for (double kv : kappas) {
      RunConfig rc;
      rc.kappa = Kappa(kv);
      rc.ga = seeded_ga(seed);
      rc.solver = BestResponseSolver::exhaustive;
      rc.max_rounds = 10 * s.num_sectors() *
                      static_cast<int>(oracle::joint_space_size(s, 1 << 20));
      const Trace t = run(s, zero_profile(s), rc);
      REQUIRE(t.reason != TerminationReason::step_limit);
      REQUIRE(oracle::check_nash(s, t.terminal_profile, rc.kappa, true));
      const auto lemmas = oracle::check_trace_lemmas(t);
      CAPTURE(seed, kv);
      REQUIRE(lemmas.passed());
      // accepted steps strictly improve and the final recount matches
      for (const TraceStep& step : t.steps)
        if (step.accepted) REQUIRE(step.cost_after < step.cost_before);
      REQUIRE(compute_loads(s, t.terminal_profile).total_overload == t.final_overload);
    }
  }
}

TEST_CASE("GA inner solver agrees with the exhaustive one on small cases", "[dynamics]") {
  const auto seeds = [] {
    std::vector<std::uint64_t> v;
    for (std::uint64_t k = 1; k <= 30; ++k) v.push_back(k);
    return v;
  }();
  const auto stats = oracle::check_ga_matches_exhaustive(seeds, GAConfig{});
  REQUIRE(stats.def3_violations == 0);
  REQUIRE(stats.worsened == 0);
  REQUIRE(stats.matched >= 27);
}

#include <catch2/catch_amalgamated.hpp>

#include "atfm/game.hpp"
#include "atfm/generator.hpp"
#include "atfm/util.hpp"
#include "helpers.hpp"

using namespace atfm;

namespace {

// Single-window pair of sectors with loads (2, 3): capacity 1 each, three
// flights sitting in sector 0 and four in sector 1.
Scenario loads_2_3() {
  Scenario s;
  s.capacities = {1, 1};
  s.horizon = 10;
  s.bin_width = 10;
  s.action_set = {0};
  for (int f = 0; f < 7; ++f) {
    const int sec = f < 3 ? 0 : 1;
    s.flights.push_back({f, sec, 0, {{sec, 0, 5}}});
  }
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("kappa bounds are enforced", "[game]") {
  REQUIRE_THROWS_AS(Kappa(-0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(Kappa(1.1), std::invalid_argument);
  REQUIRE_THROWS_AS(Kappa::ratio(3, 2), std::invalid_argument);
  REQUIRE(Kappa::ratio(1, 2).value == 0.5);
  REQUIRE(Kappa::ratio(1, 4).exact());
  REQUIRE_FALSE(Kappa(0.3).exact());
}

TEST_CASE("cost interpolates between own and total overload", "[game]") {
  const Scenario s = loads_2_3();
  const ActionProfile x = zero_profile(s);

  REQUIRE(cost(s, x, 0, Kappa(0.0)) == 2.0);
  REQUIRE(cost(s, x, 1, Kappa(0.0)) == 3.0);
  REQUIRE(cost(s, x, 0, Kappa(1.0)) == 5.0);
  REQUIRE(cost(s, x, 1, Kappa(1.0)) == 5.0);
  REQUIRE(cost(s, x, 0, Kappa(0.5)) == 3.5);
  REQUIRE(cost(s, x, 1, Kappa(0.5)) == 4.0);

  SECTION("kappa zero reduces to the own overload on random instances") {
    for (std::uint64_t seed = 80; seed < 85; ++seed) {
      const Scenario c = random_tiny(seed, 1);
      Rng rng(seed);
      ActionProfile p(static_cast<std::size_t>(c.num_flights()));
      for (auto& g : p) g = rng.below(c.num_actions());
      const LoadTable t = compute_loads(c, p);
      for (int i = 0; i < c.num_sectors(); ++i)
        REQUIRE(cost(c, p, i, Kappa(0.0)) ==
                static_cast<double>(t.sector_overload[static_cast<std::size_t>(i)]));
    }
  }
}

TEST_CASE("potential values", "[game]") {
  SECTION("feasible profile at full cooperation has zero potential") {
    const Scenario s = test::tiny1();
    REQUIRE(potential(s, {0, 1}, Kappa(1.0)) == 0.0);
  }

  SECTION("single-window worked example") {
    // sector 0: load 2 caused by its own three flights; sector 1 idle
    Scenario s;
    s.capacities = {1, 5};
    s.horizon = 10;
    s.bin_width = 10;
    s.action_set = {0};
    for (int f = 0; f < 3; ++f) s.flights.push_back({f, 0, 0, {{0, 0, 5}}});
    s.validate();
    const PotentialParts parts = potential_parts(s, zero_profile(s));
    REQUIRE(parts.total == 2);
    REQUIRE(parts.own_sum == 3);
    REQUIRE(potential(s, zero_profile(s), Kappa(0.5)) == 2.5);
  }

  SECTION("nonnegative everywhere; zero at kappa one iff feasible") {
    for (std::uint64_t seed = 90; seed < 96; ++seed) {
      const Scenario c = random_tiny(seed, 1);
      Rng rng(seed);
      ActionProfile p(static_cast<std::size_t>(c.num_flights()));
      for (auto& g : p) g = rng.below(c.num_actions());
      for (double kv : {0.0, 0.25, 0.5, 1.0}) {
        REQUIRE(potential(c, p, Kappa(kv)) >= 0.0);
      }
      const bool feasible = compute_loads(c, p).total_overload == 0;
      REQUIRE((potential(c, p, Kappa(1.0)) == 0.0) == feasible);
    }
  }
}

TEST_CASE("deviation delta", "[game]") {
  const Scenario s = test::tiny1();

  SECTION("identity deviation") {
    const DeviationDelta d = deviation_delta(s, {0, 0}, {0, 0}, 0, Kappa(0.5));
    REQUIRE(d.delta_cost == 0.0);
    REQUIRE(d.delta_potential == 0.0);
    REQUIRE(d.overload_set_fixed);
    REQUIRE(d.resource_overload_set_fixed);
  }

  SECTION("tiny1 fix at full cooperation") {
    const DeviationDelta d = deviation_delta(s, {0, 0}, {0, 1}, 0, Kappa(1.0));
    REQUIRE(d.delta_cost == -1.0);
    REQUIRE(d.delta_potential == -1.0);
    REQUIRE_FALSE(d.overload_set_fixed);
  }

  SECTION("non-unilateral deviation is rejected") {
    Scenario two = test::tiny1();
    two.flights[1].owner = 1;
    two.validate();
    REQUIRE_THROWS_AS(deviation_delta(two, {0, 0}, {1, 1}, 0, Kappa(0.5)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(deviation_delta(two, {0, 0}, {0, 1}, 0, Kappa(0.5)),
                      std::invalid_argument);
  }

  SECTION("cost change equals potential change under a fixed overloaded set") {
    int checked = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
      const Scenario c = random_tiny(seed, 1);
      Rng rng(seed);
      ActionProfile x(static_cast<std::size_t>(c.num_flights()));
      for (auto& g : x) g = rng.below(c.num_actions());
      for (int agent = 0; agent < c.num_sectors(); ++agent) {
        ActionProfile xd = x;
        for (int f = 0; f < c.num_flights(); ++f)
          if (c.flights[static_cast<std::size_t>(f)].owner == agent)
            xd[static_cast<std::size_t>(f)] = rng.below(c.num_actions());
        const DeviationDelta d = deviation_delta(c, x, xd, agent, Kappa(0.5));
        if (!d.overload_set_fixed) continue;
        ++checked;
        REQUIRE(d.delta_cost == Catch::Approx(d.delta_potential).margin(1e-9));
      }
    }
    REQUIRE(checked > 10);
  }

  SECTION("binned mode: matching deltas under a fixed resource set, with movement") {
    int checked = 0, moved = 0;
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
      const Scenario c = random_tiny(seed, 3);
      Rng rng(seed);
      ActionProfile x(static_cast<std::size_t>(c.num_flights()));
      for (auto& g : x) g = rng.below(c.num_actions());
      for (int agent = 0; agent < c.num_sectors(); ++agent) {
        ActionProfile xd = x;
        for (int f = 0; f < c.num_flights(); ++f)
          if (c.flights[static_cast<std::size_t>(f)].owner == agent)
            xd[static_cast<std::size_t>(f)] = rng.below(c.num_actions());
        const DeviationDelta d = deviation_delta(c, x, xd, agent, Kappa(0.5));
        if (!d.resource_overload_set_fixed) continue;
        ++checked;
        if (d.delta_cost != 0.0) ++moved;
        REQUIRE(d.delta_cost == Catch::Approx(d.delta_potential).margin(1e-9));
      }
    }
    REQUIRE(checked > 10);
    REQUIRE(moved > 0);
  }
}

TEST_CASE("self-prioritization bound", "[game]") {
  REQUIRE(self_prioritization_bound(1247, 28) == Catch::Approx(1.0 / 33669.0).epsilon(1e-12));
  REQUIRE(self_prioritization_bound(1247, 28) == Catch::Approx(2.970e-5).epsilon(1e-3));
  REQUIRE(self_prioritization_bound(1, 2) == 1.0);
  REQUIRE(self_prioritization_bound(2, 3) == 0.25);
  REQUIRE_THROWS_AS(self_prioritization_bound(5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(self_prioritization_bound(0, 3), std::invalid_argument);
}

#include <catch2/catch_amalgamated.hpp>

#include "atfm/generator.hpp"
#include "atfm/loads.hpp"
#include "atfm/oracle.hpp"
#include "atfm/util.hpp"
#include "helpers.hpp"

using namespace atfm;

TEST_CASE("empty flight list yields zero loads", "[loads]") {
  Scenario s = test::tiny1();
  s.flights.clear();
  const LoadTable t = compute_loads(s, {});
  for (int v : t.occupancy) REQUIRE(v == 0);
  for (long long v : t.sector_overload) REQUIRE(v == 0);
  REQUIRE(t.total_overload == 0);
  REQUIRE(t.overloaded_sectors.empty());
  REQUIRE(t.overloaded_resources.empty());
}

TEST_CASE("tiny1 occupancy and overloads", "[loads]") {
  const Scenario s = test::tiny1();

  SECTION("both undelayed") {
    const LoadTable t = compute_loads(s, {0, 0});
    REQUIRE(t.occ(0, 0) == 2);
    REQUIRE(t.occ(0, 1) == 0);
    REQUIRE(t.occ(0, 2) == 0);
    REQUIRE(t.sector_overload[0] == 1);
    REQUIRE(t.sector_overload[1] == 0);
    REQUIRE(t.overloaded_sectors == std::vector<SectorId>{0});
    REQUIRE(total_overload(t) == 1);
    REQUIRE(t.total_overload == 1);
  }

  SECTION("second flight delayed") {
    const LoadTable t = compute_loads(s, {0, 1});
    REQUIRE(t.occ(0, 0) == 1);
    REQUIRE(t.occ(0, 1) == 1);
    REQUIRE(t.occ(0, 2) == 0);
    REQUIRE(t.sector_overload[0] == 0);
    REQUIRE(t.overloaded_sectors.empty());
    REQUIRE(t.total_overload == 0);
  }
}

TEST_CASE("a flight counts once per bin even with two segments in one sector", "[loads]") {
  Scenario s;
  s.capacities = {1};
  s.horizon = 15;
  s.bin_width = 15;
  s.action_set = {0};
  s.flights = {{0, 0, 0, {{0, 0, 4}, {0, 6, 9}}}};
  s.validate();
  const LoadTable t = compute_loads(s, {0});
  REQUIRE(t.occ(0, 0) == 1);
}

TEST_CASE("contributions", "[loads]") {
  const Scenario s = test::tiny1();
  REQUIRE(contribution(s, {0, 0}, 0, 0) == 2);
  REQUIRE(contribution(s, {0, 0}, 1, 0) == 0);

  SECTION("crossing another sector contributes there") {
    Scenario c;
    c.capacities = {2, 2};
    c.horizon = 20;
    c.bin_width = 5;
    c.action_set = {0};
    c.flights = {{0, 0, 0, {{0, 0, 5}, {1, 5, 12}}}};
    c.validate();
    REQUIRE(contribution(c, {0}, 0, 1) > 0);
  }

  SECTION("column sums reproduce occupancy on random instances") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull, 14ull}) {
      const Scenario c = random_tiny(seed, 3);
      Rng rng(seed);
      ActionProfile x(static_cast<std::size_t>(c.num_flights()));
      for (auto& g : x) g = rng.below(c.num_actions());
      const LoadTable t = compute_loads(c, x);
      for (int to = 0; to < c.num_sectors(); ++to) {
        long long col = 0;
        for (int from = 0; from < c.num_sectors(); ++from) col += contribution(c, x, from, to);
        long long occ_total = 0;
        for (int b = 0; b < c.num_bins(); ++b) occ_total += t.occ(to, b);
        REQUIRE(col == occ_total);

        // per-bin split by owner, recounted independently
        const auto grid = oracle::grid_occupancy(c, x);
        for (int b = 0; b < c.num_bins(); ++b) {
          int sum = 0;
          for (int from = 0; from < c.num_sectors(); ++from) {
            const auto owned = occupancy_by_owner(c, x, from);
            sum += owned[static_cast<std::size_t>(to) * static_cast<std::size_t>(c.num_bins()) +
                         static_cast<std::size_t>(b)];
          }
          REQUIRE(sum == grid[static_cast<std::size_t>(to) * static_cast<std::size_t>(c.num_bins()) +
                              static_cast<std::size_t>(b)]);
        }
      }
    }
  }
}

TEST_CASE("total overload matches the independent recount on a generated instance", "[loads]") {
  GenParams params = preset("brest-like");
  params.num_flights = 200;
  params.seed = 5;
  const Scenario s = generate(params);
  const ActionProfile x = zero_profile(s);
  const LoadTable t = compute_loads(s, x);
  long long oracle_total = 0;
  for (long long v : oracle::sector_loads(s, x)) oracle_total += v;
  REQUIRE(t.total_overload == oracle_total);
  REQUIRE(t.occupancy == oracle::grid_occupancy(s, x));
}

TEST_CASE("new overload set", "[loads]") {
  const Scenario s = test::tiny1();

  SECTION("identity deviation") { REQUIRE(new_overload_set(s, {0, 1}, {0, 1}).empty()); }

  SECTION("reverting to the congested profile overloads sector 0") {
    REQUIRE(new_overload_set(s, {0, 1}, {0, 0}) == std::vector<SectorId>{0});
  }

  SECTION("multi-sector deviation is rejected") {
    Scenario two = test::tiny1();
    two.flights[1].owner = 1;
    two.validate();
    REQUIRE_THROWS_AS(new_overload_set(two, {0, 0}, {1, 1}), std::invalid_argument);
  }

  SECTION("matches the definition evaluated with the oracle recount") {
    for (std::uint64_t seed = 30; seed < 40; ++seed) {
      const Scenario c = random_tiny(seed, 1);
      Rng rng(seed);
      ActionProfile x(static_cast<std::size_t>(c.num_flights()));
      for (auto& g : x) g = rng.below(c.num_actions());
      const SectorId agent = c.flights.empty() ? 0 : c.flights[0].owner;
      ActionProfile xd = x;
      for (int f = 0; f < c.num_flights(); ++f)
        if (c.flights[static_cast<std::size_t>(f)].owner == agent)
          xd[static_cast<std::size_t>(f)] = rng.below(c.num_actions());
      const auto got = new_overload_set(c, x, xd);
      const auto la = oracle::sector_loads(c, x);
      const auto lb = oracle::sector_loads(c, xd);
      std::vector<SectorId> expect;
      for (int i = 0; i < c.num_sectors(); ++i)
        if (la[static_cast<std::size_t>(i)] == 0 && lb[static_cast<std::size_t>(i)] > 0)
          expect.push_back(i);
      REQUIRE(got == expect);
    }
  }
}

TEST_CASE("unilateral deviations leave other sectors' contributions unchanged", "[loads]") {
  for (std::uint64_t seed = 50; seed < 58; ++seed) {
    const Scenario s = random_tiny(seed, 3);
    Rng rng(seed);
    ActionProfile x(static_cast<std::size_t>(s.num_flights()));
    for (auto& g : x) g = rng.below(s.num_actions());
    for (int agent = 0; agent < s.num_sectors(); ++agent) {
      ActionProfile xd = x;
      bool changed = false;
      for (int f = 0; f < s.num_flights(); ++f)
        if (s.flights[static_cast<std::size_t>(f)].owner == agent) {
          xd[static_cast<std::size_t>(f)] = rng.below(s.num_actions());
          changed = true;
        }
      if (!changed) continue;
      for (int from = 0; from < s.num_sectors(); ++from) {
        if (from == agent) continue;
        for (int to = 0; to < s.num_sectors(); ++to)
          REQUIRE(contribution(s, x, from, to) == contribution(s, xd, from, to));
      }
    }
  }
}

TEST_CASE("occupancy conservation under delay shifts", "[loads]") {
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    const Scenario s = random_tiny(seed, 3);
    Rng rng(seed);
    ActionProfile x(static_cast<std::size_t>(s.num_flights()));
    for (auto& g : x) g = rng.below(s.num_actions());
    const LoadTable t = compute_loads(s, x);
    long long total_occ = 0;
    for (int v : t.occupancy) total_occ += v;
    // recount per flight with the brute-force overlap test
    long long expect = 0;
    for (int f = 0; f < s.num_flights(); ++f) {
      const Flight& fl = s.flights[static_cast<std::size_t>(f)];
      const int d = s.delay_of(x[static_cast<std::size_t>(f)]);
      for (int sec = 0; sec < s.num_sectors(); ++sec)
        for (int b = 0; b < s.num_bins(); ++b) {
          bool present = false;
          for (const auto& seg : fl.segments)
            if (seg.sector == sec &&
                oracle::overlaps_bin(fl.base_departure + d + seg.entry_offset,
                                     fl.base_departure + d + seg.exit_offset, b * s.bin_width,
                                     (b + 1) * s.bin_width))
              present = true;
          expect += present ? 1 : 0;
        }
    }
    REQUIRE(total_occ == expect);
  }
}

TEST_CASE("single-window overload equals max(0, column sum - capacity)", "[loads]") {
  for (std::uint64_t seed = 70; seed < 78; ++seed) {
    const Scenario s = random_tiny(seed, 1);
    Rng rng(seed);
    ActionProfile x(static_cast<std::size_t>(s.num_flights()));
    for (auto& g : x) g = rng.below(s.num_actions());
    const LoadTable t = compute_loads(s, x);
    for (int i = 0; i < s.num_sectors(); ++i) {
      long long col = 0;
      for (int j = 0; j < s.num_sectors(); ++j) col += contribution(s, x, j, i);
      const long long expect = std::max(0LL, col - s.capacities[static_cast<std::size_t>(i)]);
      REQUIRE(t.sector_overload[static_cast<std::size_t>(i)] == expect);
    }
  }
}

TEST_CASE("incremental shifts match a full recomputation bit for bit", "[loads]") {
  GenParams params = preset("brest-like");
  params.num_flights = 120;
  params.seed = 9;
  const Scenario s = generate(params);
  Rng rng(99);
  ActionProfile x = zero_profile(s);
  LoadTable t = compute_loads(s, x);
  for (int step = 0; step < 200; ++step) {
    const int f = rng.below(s.num_flights());
    const int to = rng.below(s.num_actions());
    shift_flight(t, s, f, s.delay_of(x[static_cast<std::size_t>(f)]), s.delay_of(to));
    x[static_cast<std::size_t>(f)] = to;
  }
  refresh_overload_sets(t);
  REQUIRE(t == compute_loads(s, x));
}

TEST_CASE("profile shape mismatch is rejected", "[loads]") {
  const Scenario s = test::tiny1();
  REQUIRE_THROWS_AS(compute_loads(s, {0}), std::invalid_argument);
  REQUIRE_THROWS_AS(compute_loads(s, {0, 0, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(compute_loads(s, {0, 7}), std::invalid_argument);
}

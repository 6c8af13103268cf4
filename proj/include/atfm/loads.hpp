#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "atfm/scenario.hpp"

namespace atfm {

// Occupancy and overload state for one action profile.
//
// occupancy[i*num_bins + t] counts flights present in sector i during bin t
// (a flight counts once per (sector, bin) even if several of its segments
// touch the bin). sector_overload[i] = sum over bins of max(0, occ - D_i),
// in aircraft-bins. The overloaded sets are derived from occupancy and are
// refreshed explicitly after incremental edits.
struct LoadTable {
  int num_sectors = 0;
  int num_bins = 0;
  std::vector<int> capacities;
  std::vector<int> occupancy;
  std::vector<long long> sector_overload;
  long long total_overload = 0;
  std::vector<SectorId> overloaded_sectors;                 // sorted
  std::vector<std::pair<SectorId, int>> overloaded_resources;  // sorted (sector, bin)

  bool operator==(const LoadTable&) const = default;

  int occ(int sector, int bin) const {
    return occupancy[static_cast<std::size_t>(sector) * static_cast<std::size_t>(num_bins) +
                     static_cast<std::size_t>(bin)];
  }
  int& occ(int sector, int bin) {
    return occupancy[static_cast<std::size_t>(sector) * static_cast<std::size_t>(num_bins) +
                     static_cast<std::size_t>(bin)];
  }
};

// Deduplicated (sector, bin) presence of one flight at the given delay.
inline void flight_presence(const Scenario& s, const Flight& f, int delay,
                            std::vector<std::pair<int, int>>& out) {
  out.clear();
  const int w = s.bin_width;
  const int last_bin = s.num_bins() - 1;
  for (const auto& seg : f.segments) {
    const int start = f.base_departure + delay + seg.entry_offset;
    const int end = f.base_departure + delay + seg.exit_offset;
    int b0 = start / w;
    int b1 = (end - 1) / w;
    b0 = std::max(b0, 0);
    b1 = std::min(b1, last_bin);
    for (int b = b0; b <= b1; ++b) out.emplace_back(seg.sector, b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

namespace detail {
inline std::vector<std::pair<int, int>>& presence_scratch() {
  thread_local std::vector<std::pair<int, int>> buf;
  return buf;
}
}  // namespace detail

inline void add_flight(LoadTable& t, const Scenario& s, int flight_index, int delay) {
  auto& buf = detail::presence_scratch();
  flight_presence(s, s.flights[static_cast<std::size_t>(flight_index)], delay, buf);
  for (const auto& [sec, bin] : buf) {
    int& o = t.occ(sec, bin);
    if (o >= t.capacities[static_cast<std::size_t>(sec)]) {
      ++t.sector_overload[static_cast<std::size_t>(sec)];
      ++t.total_overload;
    }
    ++o;
  }
}

inline void remove_flight(LoadTable& t, const Scenario& s, int flight_index, int delay) {
  auto& buf = detail::presence_scratch();
  flight_presence(s, s.flights[static_cast<std::size_t>(flight_index)], delay, buf);
  for (const auto& [sec, bin] : buf) {
    int& o = t.occ(sec, bin);
    --o;
    if (o >= t.capacities[static_cast<std::size_t>(sec)]) {
      --t.sector_overload[static_cast<std::size_t>(sec)];
      --t.total_overload;
    }
  }
}

inline void shift_flight(LoadTable& t, const Scenario& s, int flight_index, int old_delay,
                         int new_delay) {
  if (old_delay == new_delay) return;
  remove_flight(t, s, flight_index, old_delay);
  add_flight(t, s, flight_index, new_delay);
}

// Rebuilds overloaded_sectors / overloaded_resources from occupancy. The
// incremental editors above keep counts and overloads exact but leave these
// sets stale; call this before handing the table to a consumer of the sets.
inline void refresh_overload_sets(LoadTable& t) {
  t.overloaded_sectors.clear();
  t.overloaded_resources.clear();
  for (int i = 0; i < t.num_sectors; ++i) {
    if (t.sector_overload[static_cast<std::size_t>(i)] > 0) t.overloaded_sectors.push_back(i);
    const int cap = t.capacities[static_cast<std::size_t>(i)];
    for (int b = 0; b < t.num_bins; ++b)
      if (t.occ(i, b) > cap) t.overloaded_resources.emplace_back(i, b);
  }
}

inline LoadTable empty_load_table(const Scenario& s) {
  LoadTable t;
  t.num_sectors = s.num_sectors();
  t.num_bins = s.num_bins();
  t.capacities = s.capacities;
  t.occupancy.assign(static_cast<std::size_t>(t.num_sectors) * static_cast<std::size_t>(t.num_bins), 0);
  t.sector_overload.assign(static_cast<std::size_t>(t.num_sectors), 0);
  return t;
}

inline LoadTable compute_loads(const Scenario& s, const ActionProfile& x) {
  validate_profile(s, x);
  LoadTable t = empty_load_table(s);
  for (int f = 0; f < s.num_flights(); ++f)
    add_flight(t, s, f, s.delay_of(x[static_cast<std::size_t>(f)]));
  refresh_overload_sets(t);
  return t;
}

inline long long total_overload(const LoadTable& t) {
  long long sum = 0;
  for (long long v : t.sector_overload) sum += v;
  return sum;
}

// Aircraft-bins contributed by flights controlled by `from` to the load of
// sector `to`.
inline long long contribution(const Scenario& s, const ActionProfile& x, SectorId from,
                              SectorId to) {
  validate_profile(s, x);
  if (from < 0 || from >= s.num_sectors() || to < 0 || to >= s.num_sectors())
    throw std::invalid_argument("contribution: sector id out of range");
  auto& buf = detail::presence_scratch();
  long long sum = 0;
  for (int f = 0; f < s.num_flights(); ++f) {
    const Flight& fl = s.flights[static_cast<std::size_t>(f)];
    if (fl.owner != from) continue;
    flight_presence(s, fl, s.delay_of(x[static_cast<std::size_t>(f)]), buf);
    for (const auto& [sec, bin] : buf)
      if (sec == to) ++sum;
  }
  return sum;
}

// Per-bin occupancy in every sector restricted to flights controlled by
// `owner` (column `owner` of the contribution matrix, resolved by bin).
inline std::vector<int> occupancy_by_owner(const Scenario& s, const ActionProfile& x,
                                           SectorId owner) {
  validate_profile(s, x);
  std::vector<int> grid(static_cast<std::size_t>(s.num_sectors()) * static_cast<std::size_t>(s.num_bins()), 0);
  auto& buf = detail::presence_scratch();
  for (int f = 0; f < s.num_flights(); ++f) {
    const Flight& fl = s.flights[static_cast<std::size_t>(f)];
    if (fl.owner != owner) continue;
    flight_presence(s, fl, s.delay_of(x[static_cast<std::size_t>(f)]), buf);
    for (const auto& [sec, bin] : buf)
      ++grid[static_cast<std::size_t>(sec) * static_cast<std::size_t>(s.num_bins()) + static_cast<std::size_t>(bin)];
  }
  return grid;
}

// Per-bin own-sector occupancy: entry (i, t) counts flights controlled by i
// present in sector i during bin t.
inline std::vector<int> own_contribution_grid(const Scenario& s, const ActionProfile& x) {
  validate_profile(s, x);
  const std::size_t bins = static_cast<std::size_t>(s.num_bins());
  std::vector<int> grid(static_cast<std::size_t>(s.num_sectors()) * bins, 0);
  auto& buf = detail::presence_scratch();
  for (int f = 0; f < s.num_flights(); ++f) {
    const Flight& fl = s.flights[static_cast<std::size_t>(f)];
    flight_presence(s, fl, s.delay_of(x[static_cast<std::size_t>(f)]), buf);
    for (const auto& [sec, bin] : buf)
      if (sec == fl.owner) ++grid[static_cast<std::size_t>(sec) * bins + static_cast<std::size_t>(bin)];
  }
  return grid;
}

// Sectors that were feasible under x and become overloaded under x_dev.
// x_dev must be a unilateral deviation (all changed flights share one owner).
inline std::vector<SectorId> new_overload_set(const Scenario& s, const ActionProfile& x,
                                              const ActionProfile& x_dev) {
  const auto owners = deviating_sectors(s, x, x_dev);
  if (owners.size() > 1)
    throw std::invalid_argument("new_overload_set: deviation touches flights of " +
                                std::to_string(owners.size()) + " sectors, expected one");
  const LoadTable before = compute_loads(s, x);
  const LoadTable after = compute_loads(s, x_dev);
  std::vector<SectorId> result;
  for (int i = 0; i < s.num_sectors(); ++i) {
    if (before.sector_overload[static_cast<std::size_t>(i)] == 0 &&
        after.sector_overload[static_cast<std::size_t>(i)] > 0)
      result.push_back(i);
  }
  return result;
}

}  // namespace atfm

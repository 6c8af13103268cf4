#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace atfm {

// Dense 0-based identifiers; equal to the position in the owning Scenario.
using SectorId = int;
using FlightId = int;

// One delay index per flight, indexing into Scenario::action_set.
using ActionProfile = std::vector<int>;

struct TrajectorySegment {
  SectorId sector = 0;
  int entry_offset = 0;  // minutes after departure
  int exit_offset = 0;   // minutes after departure, exclusive

  bool operator==(const TrajectorySegment&) const = default;
};

struct Flight {
  FlightId id = 0;
  SectorId owner = 0;  // sector controlling the departure slot
  int base_departure = 0;
  std::vector<TrajectorySegment> segments;

  bool operator==(const Flight&) const = default;

  int total_duration() const {
    int d = 0;
    for (const auto& s : segments) d = std::max(d, s.exit_offset);
    return d;
  }
};

// Immutable world description. Times are integer minutes; occupancy is
// counted on half-open bins [t*w, (t+1)*w) over a horizon that bin_width
// divides. bin_width == horizon is the single-window configuration.
struct Scenario {
  std::vector<int> capacities;  // indexed by SectorId, all positive
  std::vector<Flight> flights;
  int horizon = 0;
  int bin_width = 0;
  std::vector<int> action_set;  // sorted distinct delays in minutes, contains 0

  bool operator==(const Scenario&) const = default;

  int num_sectors() const { return static_cast<int>(capacities.size()); }
  int num_flights() const { return static_cast<int>(flights.size()); }
  int num_bins() const { return bin_width > 0 ? horizon / bin_width : 0; }
  int num_actions() const { return static_cast<int>(action_set.size()); }
  int max_delay() const { return action_set.empty() ? 0 : action_set.back(); }
  bool single_window() const { return bin_width == horizon; }
  int delay_of(int action_index) const { return action_set.at(static_cast<std::size_t>(action_index)); }

  void validate() const;
};

inline void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
  if (capacities.empty()) fail("at least one sector is required");
  for (int i = 0; i < num_sectors(); ++i) {
    if (capacities[static_cast<std::size_t>(i)] <= 0)
      fail("sector " + std::to_string(i) + ": capacity must be a positive integer");
  }
  if (horizon <= 0) fail("horizon must be positive");
  if (bin_width <= 0 || horizon % bin_width != 0)
    fail("bin_width must be positive and divide the horizon");
  if (action_set.empty()) fail("action_set must be nonempty");
  if (action_set.front() != 0) fail("action_set must contain 0 as its smallest entry");
  for (std::size_t k = 0; k < action_set.size(); ++k) {
    if (action_set[k] < 0) fail("action_set entries must be nonnegative");
    if (k > 0 && action_set[k] <= action_set[k - 1]) fail("action_set must be sorted and distinct");
  }
  for (int f = 0; f < num_flights(); ++f) {
    const Flight& fl = flights[static_cast<std::size_t>(f)];
    const std::string tag = "flight " + std::to_string(f);
    if (fl.id != f) fail(tag + ": id must equal its position (" + std::to_string(fl.id) + ")");
    if (fl.owner < 0 || fl.owner >= num_sectors()) fail(tag + ": owner sector out of range");
    if (fl.base_departure < 0) fail(tag + ": base_departure must be nonnegative");
    if (fl.segments.empty()) fail(tag + ": needs at least one trajectory segment");
    int prev_exit = -1;
    for (std::size_t k = 0; k < fl.segments.size(); ++k) {
      const auto& seg = fl.segments[k];
      const std::string stag = tag + " segment " + std::to_string(k);
      if (seg.sector < 0 || seg.sector >= num_sectors()) fail(stag + ": sector out of range");
      if (seg.entry_offset < 0) fail(stag + ": entry must be nonnegative");
      if (seg.exit_offset <= seg.entry_offset) fail(stag + ": exit must be after entry");
      if (k > 0 && seg.entry_offset < prev_exit) fail(stag + ": segments must be sorted and non-overlapping");
      prev_exit = seg.exit_offset;
    }
    if (fl.base_departure + fl.total_duration() + max_delay() > horizon)
      fail(tag + ": presence must stay inside the horizon for every delay choice");
  }
}

inline ActionProfile zero_profile(const Scenario& s) {
  return ActionProfile(static_cast<std::size_t>(s.num_flights()), 0);
}

inline void validate_profile(const Scenario& s, const ActionProfile& x) {
  if (static_cast<int>(x.size()) != s.num_flights())
    throw std::invalid_argument("profile: expected " + std::to_string(s.num_flights()) +
                                " entries, got " + std::to_string(x.size()));
  for (std::size_t f = 0; f < x.size(); ++f) {
    if (x[f] < 0 || x[f] >= s.num_actions())
      throw std::invalid_argument("profile: flight " + std::to_string(f) + " delay index out of range");
  }
}

// Flight indices grouped by controlling sector.
inline std::vector<std::vector<int>> owner_index(const Scenario& s) {
  std::vector<std::vector<int>> idx(static_cast<std::size_t>(s.num_sectors()));
  for (int f = 0; f < s.num_flights(); ++f)
    idx[static_cast<std::size_t>(s.flights[static_cast<std::size_t>(f)].owner)].push_back(f);
  return idx;
}

// Owners of the flights whose delay differs between the two profiles, sorted.
inline std::vector<SectorId> deviating_sectors(const Scenario& s, const ActionProfile& a,
                                               const ActionProfile& b) {
  validate_profile(s, a);
  validate_profile(s, b);
  std::vector<SectorId> owners;
  for (std::size_t f = 0; f < a.size(); ++f)
    if (a[f] != b[f]) owners.push_back(s.flights[f].owner);
  std::sort(owners.begin(), owners.end());
  owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
  return owners;
}

}  // namespace atfm

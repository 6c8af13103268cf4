#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "atfm/ga.hpp"
#include "atfm/loads.hpp"
#include "atfm/scenario.hpp"

namespace atfm {

enum class BaselineMethod { centralized, fcfs };

inline std::string to_string(BaselineMethod m) {
  return m == BaselineMethod::centralized ? "centralized" : "fcfs";
}

struct BaselineResult {
  BaselineMethod method = BaselineMethod::centralized;
  ActionProfile profile;
  long long total_overload_before = 0;
  long long total_overload_after = 0;
  double wall_seconds = 0.0;
};

// System-wide GA over the full joint delay space, minimizing total overload.
// Same engine and hyperparameters as the per-sector solver; the start
// profile is the incumbent, so the result is never worse than x0.
inline BaselineResult centralized(const Scenario& s, const ActionProfile& x0,
                                  const GAConfig& ga) {
  validate_profile(s, x0);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  BaselineResult result;
  result.method = BaselineMethod::centralized;
  result.total_overload_before = compute_loads(s, x0).total_overload;

  LoadTable work = empty_load_table(s);
  auto fitness = [&](const Chromosome& c) {
    std::fill(work.occupancy.begin(), work.occupancy.end(), 0);
    std::fill(work.sector_overload.begin(), work.sector_overload.end(), 0);
    work.total_overload = 0;
    for (int f = 0; f < s.num_flights(); ++f)
      add_flight(work, s, f, s.delay_of(c[static_cast<std::size_t>(f)]));
    return static_cast<double>(work.total_overload);
  };

  const std::vector<int> arities(static_cast<std::size_t>(s.num_flights()), s.num_actions());
  const GAResult r = minimize(arities, fitness, x0, ga);

  result.profile = r.best;
  result.total_overload_after = compute_loads(s, r.best).total_overload;
  result.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return result;
}

namespace detail {

inline bool flight_in_resource(const Scenario& s, const Flight& f, int delay, SectorId sector,
                               int bin) {
  const int bs = bin * s.bin_width;
  const int be = bs + s.bin_width;
  for (const auto& seg : f.segments) {
    if (seg.sector != sector) continue;
    const int start = f.base_departure + delay + seg.entry_offset;
    const int end = f.base_departure + delay + seg.exit_offset;
    if (std::max(start, bs) < std::min(end, be)) return true;
  }
  return false;
}

// Latest delayed entry into `sector` among segments of f overlapping the bin.
inline int latest_entry_in_resource(const Scenario& s, const Flight& f, int delay,
                                    SectorId sector, int bin) {
  const int bs = bin * s.bin_width;
  const int be = bs + s.bin_width;
  int latest = -1;
  for (const auto& seg : f.segments) {
    if (seg.sector != sector) continue;
    const int start = f.base_departure + delay + seg.entry_offset;
    const int end = f.base_departure + delay + seg.exit_offset;
    if (std::max(start, bs) < std::min(end, be)) latest = std::max(latest, start);
  }
  return latest;
}

}  // namespace detail

// Chronological first-come-first-served fix-up: walk the sector-bins in time
// order; at an overloaded resource, repeatedly delay the most recent entrant
// (ties to the larger flight id) by the smallest extra delay that removes it
// from that bin. Flights that cannot be removed (already at the maximum
// delay, or present under every remaining option) are skipped; leftover
// overload stays and the scan moves on. Delays only grow, so earlier bins
// never regress and one forward pass suffices.
inline BaselineResult fcfs(const Scenario& s, const ActionProfile& x0) {
  validate_profile(s, x0);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  BaselineResult result;
  result.method = BaselineMethod::fcfs;

  ActionProfile delays = x0;
  LoadTable table = compute_loads(s, x0);
  result.total_overload_before = table.total_overload;

  for (int bin = 0; bin < s.num_bins(); ++bin) {
    for (int sec = 0; sec < s.num_sectors(); ++sec) {
      while (table.occ(sec, bin) > s.capacities[static_cast<std::size_t>(sec)]) {
        int pick = -1;
        int pick_entry = -1;
        int pick_new_idx = -1;
        for (int f = 0; f < s.num_flights(); ++f) {
          const Flight& fl = s.flights[static_cast<std::size_t>(f)];
          const int cur_idx = delays[static_cast<std::size_t>(f)];
          const int cur_delay = s.delay_of(cur_idx);
          const int entry = detail::latest_entry_in_resource(s, fl, cur_delay, sec, bin);
          if (entry < 0) continue;  // not present here
          int fix_idx = -1;
          for (int k = cur_idx + 1; k < s.num_actions(); ++k) {
            if (!detail::flight_in_resource(s, fl, s.delay_of(k), sec, bin)) {
              fix_idx = k;
              break;
            }
          }
          if (fix_idx < 0) continue;  // cannot be pushed out of this bin
          if (entry > pick_entry || (entry == pick_entry && f > pick)) {
            pick = f;
            pick_entry = entry;
            pick_new_idx = fix_idx;
          }
        }
        if (pick < 0) break;  // residual overload stays at this resource
        const int old_idx = delays[static_cast<std::size_t>(pick)];
        shift_flight(table, s, pick, s.delay_of(old_idx), s.delay_of(pick_new_idx));
        delays[static_cast<std::size_t>(pick)] = pick_new_idx;
      }
    }
  }

  refresh_overload_sets(table);
  result.profile = delays;
  result.total_overload_after = table.total_overload;
  result.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return result;
}

}  // namespace atfm

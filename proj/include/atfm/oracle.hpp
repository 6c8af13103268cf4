#pragma once

// Independent brute-force checks for the game's structural properties.
// The load computations here deliberately share no code with loads.hpp:
// occupancy is recounted per (sector, bin) with a direct interval-overlap
// scan, so the two paths can be compared differentially.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atfm/dynamics.hpp"
#include "atfm/game.hpp"
#include "atfm/generator.hpp"
#include "atfm/io.hpp"
#include "atfm/scenario.hpp"

namespace atfm::oracle {

struct Violation {
  std::uint64_t seed = 0;
  std::string detail;
};

struct VerifierReport {
  std::string check;
  long long instances = 0;
  long long deviations = 0;
  long long nonzero_deltas = 0;  // deviations that moved cost or potential at all
  std::vector<Violation> violations;
  std::string note;

  bool passed() const { return violations.empty(); }
};

inline json report_to_json(const VerifierReport& r) {
  json j;
  j["check"] = r.check;
  j["instances"] = r.instances;
  j["deviations"] = r.deviations;
  j["passed"] = r.passed();
  if (!r.note.empty()) j["note"] = r.note;
  j["violations"] = json::array();
  for (const auto& v : r.violations)
    j["violations"].push_back({{"seed", v.seed}, {"detail", v.detail}});
  return j;
}

// ---------------------------------------------------------------------------
// Independent load computation.

inline bool overlaps_bin(int start, int end, int bin_start, int bin_end) {
  return std::max(start, bin_start) < std::min(end, bin_end);
}

inline std::vector<int> grid_occupancy(const Scenario& s, const ActionProfile& x) {
  const int m = s.num_sectors();
  const int bins = s.num_bins();
  const int w = s.bin_width;
  std::vector<int> grid(static_cast<std::size_t>(m) * static_cast<std::size_t>(bins), 0);
  for (int sec = 0; sec < m; ++sec) {
    for (int b = 0; b < bins; ++b) {
      const int bs = b * w;
      const int be = bs + w;
      int count = 0;
      for (int f = 0; f < s.num_flights(); ++f) {
        const Flight& fl = s.flights[static_cast<std::size_t>(f)];
        const int d = s.delay_of(x[static_cast<std::size_t>(f)]);
        for (const auto& seg : fl.segments) {
          if (seg.sector != sec) continue;
          if (overlaps_bin(fl.base_departure + d + seg.entry_offset,
                           fl.base_departure + d + seg.exit_offset, bs, be)) {
            ++count;
            break;
          }
        }
      }
      grid[static_cast<std::size_t>(sec) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b)] = count;
    }
  }
  return grid;
}

inline std::vector<long long> sector_loads(const Scenario& s, const ActionProfile& x) {
  const auto grid = grid_occupancy(s, x);
  const int bins = s.num_bins();
  std::vector<long long> loads(static_cast<std::size_t>(s.num_sectors()), 0);
  for (int sec = 0; sec < s.num_sectors(); ++sec)
    for (int b = 0; b < bins; ++b) {
      const int excess = grid[static_cast<std::size_t>(sec) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b)] -
                         s.capacities[static_cast<std::size_t>(sec)];
      if (excess > 0) loads[static_cast<std::size_t>(sec)] += excess;
    }
  return loads;
}

inline long long total_load(const Scenario& s, const ActionProfile& x) {
  long long sum = 0;
  for (long long v : sector_loads(s, x)) sum += v;
  return sum;
}

inline int own_count_at(const Scenario& s, const ActionProfile& x, int sec, int bin) {
  const int bs = bin * s.bin_width;
  const int be = bs + s.bin_width;
  int count = 0;
  for (int f = 0; f < s.num_flights(); ++f) {
    const Flight& fl = s.flights[static_cast<std::size_t>(f)];
    if (fl.owner != sec) continue;
    const int d = s.delay_of(x[static_cast<std::size_t>(f)]);
    for (const auto& seg : fl.segments) {
      if (seg.sector != sec) continue;
      if (overlaps_bin(fl.base_departure + d + seg.entry_offset,
                       fl.base_departure + d + seg.exit_offset, bs, be)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

struct ProfileStats {
  std::vector<long long> sector_load;
  long long total = 0;
  long long own_sum = 0;          // owner contributions summed over overloaded resources
  std::uint32_t overloaded_mask = 0;  // bit per sector
  std::uint32_t resource_mask = 0;    // bit per (sector * bins + bin)
};

inline ProfileStats stats_from_profile(const Scenario& s, const ActionProfile& x) {
  ProfileStats st;
  const auto grid = grid_occupancy(s, x);
  const int bins = s.num_bins();
  st.sector_load.assign(static_cast<std::size_t>(s.num_sectors()), 0);
  for (int sec = 0; sec < s.num_sectors(); ++sec) {
    for (int b = 0; b < bins; ++b) {
      const std::size_t cell = static_cast<std::size_t>(sec) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b);
      const int excess = grid[cell] - s.capacities[static_cast<std::size_t>(sec)];
      if (excess > 0) {
        st.sector_load[static_cast<std::size_t>(sec)] += excess;
        st.resource_mask |= 1u << cell;
        st.own_sum += own_count_at(s, x, sec, b);
      }
    }
    if (st.sector_load[static_cast<std::size_t>(sec)] > 0) st.overloaded_mask |= 1u << sec;
    st.total += st.sector_load[static_cast<std::size_t>(sec)];
  }
  return st;
}

// ---------------------------------------------------------------------------
// Exhaustive profile enumeration for small joint spaces.

inline long long joint_space_size(const Scenario& s, long long cap) {
  long long size = 1;
  for (int f = 0; f < s.num_flights(); ++f) {
    size *= s.num_actions();
    if (size > cap) return cap + 1;
  }
  return size;
}

inline ActionProfile profile_from_index(long long idx, int n, int p) {
  ActionProfile x(static_cast<std::size_t>(n), 0);
  for (int f = n - 1; f >= 0; --f) {
    x[static_cast<std::size_t>(f)] = static_cast<int>(idx % p);
    idx /= p;
  }
  return x;
}

struct Enumeration {
  long long size = 0;
  std::vector<ProfileStats> stats;
};

inline Enumeration enumerate_stats(const Scenario& s, long long cap = 1LL << 20) {
  const long long size = joint_space_size(s, cap);
  if (size > cap)
    throw std::runtime_error("oracle: joint space exceeds enumeration cap " + std::to_string(cap));
  Enumeration e;
  e.size = size;
  e.stats.reserve(static_cast<std::size_t>(size));
  for (long long idx = 0; idx < size; ++idx)
    e.stats.push_back(stats_from_profile(s, profile_from_index(idx, s.num_flights(), s.num_actions())));
  return e;
}

struct TotalOverloadMinimum {
  long long min_value = 0;
  std::vector<ActionProfile> argmins;
};

inline TotalOverloadMinimum enumerate_min_total_overload(const Scenario& s,
                                                         long long cap = 1LL << 20) {
  const Enumeration e = enumerate_stats(s, cap);
  TotalOverloadMinimum r;
  r.min_value = e.size > 0 ? e.stats[0].total : 0;
  for (long long idx = 1; idx < e.size; ++idx)
    r.min_value = std::min(r.min_value, e.stats[static_cast<std::size_t>(idx)].total);
  for (long long idx = 0; idx < e.size; ++idx)
    if (e.stats[static_cast<std::size_t>(idx)].total == r.min_value)
      r.argmins.push_back(profile_from_index(idx, s.num_flights(), s.num_actions()));
  return r;
}

struct PotentialMinimum {
  double min_value = 0.0;
  std::vector<ActionProfile> argmins;
};

inline PotentialMinimum enumerate_min_potential(const Scenario& s, const Kappa& kappa,
                                                long long cap = 1LL << 20) {
  const Enumeration e = enumerate_stats(s, cap);
  PotentialMinimum r;
  if (kappa.exact()) {
    long long best = 0;
    bool first = true;
    std::vector<long long> scaled(static_cast<std::size_t>(e.size), 0);
    for (long long idx = 0; idx < e.size; ++idx) {
      const auto& st = e.stats[static_cast<std::size_t>(idx)];
      const long long v = kappa.num * st.total + (kappa.den - kappa.num) * st.own_sum;
      scaled[static_cast<std::size_t>(idx)] = v;
      if (first || v < best) {
        best = v;
        first = false;
      }
    }
    r.min_value = static_cast<double>(best) / static_cast<double>(kappa.den);
    for (long long idx = 0; idx < e.size; ++idx)
      if (scaled[static_cast<std::size_t>(idx)] == best)
        r.argmins.push_back(profile_from_index(idx, s.num_flights(), s.num_actions()));
  } else {
    std::vector<double> values(static_cast<std::size_t>(e.size), 0.0);
    for (long long idx = 0; idx < e.size; ++idx) {
      const auto& st = e.stats[static_cast<std::size_t>(idx)];
      values[static_cast<std::size_t>(idx)] = kappa.value * static_cast<double>(st.total) +
                                              (1.0 - kappa.value) * static_cast<double>(st.own_sum);
    }
    r.min_value = values.empty() ? 0.0 : values[0];
    for (double v : values) r.min_value = std::min(r.min_value, v);
    for (long long idx = 0; idx < e.size; ++idx)
      if (values[static_cast<std::size_t>(idx)] == r.min_value)
        r.argmins.push_back(profile_from_index(idx, s.num_flights(), s.num_actions()));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Unilateral deviation machinery.

// Buckets of profile indices that agree on every flight outside `agent`.
inline std::map<long long, std::vector<long long>> deviation_buckets(const Scenario& s,
                                                                     const Enumeration& e,
                                                                     SectorId agent) {
  std::vector<long long> place(static_cast<std::size_t>(s.num_flights()), 0);
  long long v = 1;
  for (int f = s.num_flights() - 1; f >= 0; --f) {
    place[static_cast<std::size_t>(f)] = v;
    v *= s.num_actions();
  }
  std::vector<int> agent_flights;
  for (int f = 0; f < s.num_flights(); ++f)
    if (s.flights[static_cast<std::size_t>(f)].owner == agent) agent_flights.push_back(f);

  std::map<long long, std::vector<long long>> buckets;
  if (agent_flights.empty()) return buckets;
  for (long long idx = 0; idx < e.size; ++idx) {
    long long sig = idx;
    for (int f : agent_flights) {
      const long long digit = (idx / place[static_cast<std::size_t>(f)]) % s.num_actions();
      sig -= digit * place[static_cast<std::size_t>(f)];
    }
    buckets[sig].push_back(idx);
  }
  return buckets;
}

enum class PotentialPremise { fixed_overload_set, fixed_resource_set, unconditional };

// Exact-arithmetic verification that a unilateral deviation moves the cost
// and the potential by the same amount, subject to the selected premise.
// kappa must be exact; all comparisons are on integers scaled by kappa.den.
inline VerifierReport check_exact_potential(const std::vector<std::uint64_t>& seeds, int bins,
                                            const Kappa& kappa, PotentialPremise premise) {
  if (!kappa.exact())
    throw std::invalid_argument("check_exact_potential: kappa must be an exact ratio");
  VerifierReport report;
  report.check = "exact-potential";
  for (std::uint64_t seed : seeds) {
    const Scenario s = random_tiny(seed, bins);
    const Enumeration e = enumerate_stats(s);
    ++report.instances;
    for (int agent = 0; agent < s.num_sectors(); ++agent) {
      for (const auto& [sig, idxs] : deviation_buckets(s, e, agent)) {
        for (long long a : idxs) {
          const auto& sa = e.stats[static_cast<std::size_t>(a)];
          for (long long b : idxs) {
            if (a == b) continue;
            const auto& sb = e.stats[static_cast<std::size_t>(b)];
            if (premise == PotentialPremise::fixed_overload_set &&
                sa.overloaded_mask != sb.overloaded_mask)
              continue;
            if (premise == PotentialPremise::fixed_resource_set &&
                sa.resource_mask != sb.resource_mask)
              continue;
            ++report.deviations;
            const long long d_own = sb.sector_load[static_cast<std::size_t>(agent)] -
                                    sa.sector_load[static_cast<std::size_t>(agent)];
            const long long d_total = sb.total - sa.total;
            const long long d_cost = kappa.den * d_own + kappa.num * (d_total - d_own);
            const long long d_pot =
                kappa.num * d_total + (kappa.den - kappa.num) * (sb.own_sum - sa.own_sum);
            if (d_cost != 0 || d_pot != 0) ++report.nonzero_deltas;
            if (d_cost != d_pot) {
              report.violations.push_back(
                  {seed, "agent " + std::to_string(agent) + " profile " + std::to_string(a) +
                             " -> " + std::to_string(b) + ": scaled dJ=" + std::to_string(d_cost) +
                             " dPhi=" + std::to_string(d_pot)});
            }
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Adjudication of the claim that total overload is an exact potential for
// the purely self-interested game. A mismatch needs a deviation that changes
// other sectors' overloads, which the restricted invariances allow.

struct KappaZeroCounterexample {
  bool found = false;
  Scenario scenario;
  ActionProfile profile;
  ActionProfile deviation;
  SectorId agent = 0;
  long long delta_agent_overload = 0;
  long long delta_total_overload = 0;
};

inline bool kappa_zero_mismatch(const Scenario& s, const ActionProfile& x,
                                const ActionProfile& x_dev, SectorId agent, long long* d_own,
                                long long* d_total) {
  const auto la = sector_loads(s, x);
  const auto lb = sector_loads(s, x_dev);
  long long ta = 0, tb = 0;
  for (long long v : la) ta += v;
  for (long long v : lb) tb += v;
  *d_own = lb[static_cast<std::size_t>(agent)] - la[static_cast<std::size_t>(agent)];
  *d_total = tb - ta;
  return *d_total != *d_own;
}

inline Scenario remove_flight_from_scenario(const Scenario& s, int flight) {
  Scenario r = s;
  r.flights.erase(r.flights.begin() + flight);
  for (std::size_t f = 0; f < r.flights.size(); ++f) r.flights[f].id = static_cast<int>(f);
  return r;
}

inline bool sector_used(const Scenario& s, int sec) {
  for (const Flight& f : s.flights) {
    if (f.owner == sec) return true;
    for (const auto& seg : f.segments)
      if (seg.sector == sec) return true;
  }
  return false;
}

inline Scenario remove_sector_from_scenario(const Scenario& s, int sec) {
  Scenario r = s;
  r.capacities.erase(r.capacities.begin() + sec);
  for (Flight& f : r.flights) {
    if (f.owner > sec) --f.owner;
    for (auto& seg : f.segments)
      if (seg.sector > sec) --seg.sector;
  }
  return r;
}

// Greedy minimization: drop flights, then unused sectors, while the mismatch
// persists.
inline KappaZeroCounterexample shrink_counterexample(KappaZeroCounterexample ce) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int f = ce.scenario.num_flights() - 1; f >= 0 && !changed; --f) {
      if (ce.scenario.num_flights() <= 1) break;
      ActionProfile x = ce.profile;
      ActionProfile xd = ce.deviation;
      x.erase(x.begin() + f);
      xd.erase(xd.begin() + f);
      if (x == xd) continue;  // deviation would vanish
      const Scenario cand = remove_flight_from_scenario(ce.scenario, f);
      long long d_own = 0, d_total = 0;
      if (kappa_zero_mismatch(cand, x, xd, ce.agent, &d_own, &d_total)) {
        ce.scenario = cand;
        ce.profile = std::move(x);
        ce.deviation = std::move(xd);
        ce.delta_agent_overload = d_own;
        ce.delta_total_overload = d_total;
        changed = true;
      }
    }
  }
  for (int sec = ce.scenario.num_sectors() - 1; sec >= 0; --sec) {
    if (sec == ce.agent || sector_used(ce.scenario, sec)) continue;
    ce.scenario = remove_sector_from_scenario(ce.scenario, sec);
    if (ce.agent > sec) --ce.agent;
  }
  return ce;
}

struct KappaZeroAdjudication {
  VerifierReport report;  // always passes; the note carries the status
  KappaZeroCounterexample counterexample;
};

inline KappaZeroAdjudication adjudicate_kappa_zero(const std::vector<std::uint64_t>& seeds,
                                                   int bins = 3) {
  KappaZeroAdjudication adj;
  adj.report.check = "kappa-zero-adjudication";
  for (std::uint64_t seed : seeds) {
    const Scenario s = random_tiny(seed, bins);
    const Enumeration e = enumerate_stats(s);
    ++adj.report.instances;
    for (int agent = 0; agent < s.num_sectors() && !adj.counterexample.found; ++agent) {
      for (const auto& [sig, idxs] : deviation_buckets(s, e, agent)) {
        for (long long a : idxs) {
          const auto& sa = e.stats[static_cast<std::size_t>(a)];
          for (long long b : idxs) {
            if (a == b) continue;
            ++adj.report.deviations;
            const auto& sb = e.stats[static_cast<std::size_t>(b)];
            const long long d_own = sb.sector_load[static_cast<std::size_t>(agent)] -
                                    sa.sector_load[static_cast<std::size_t>(agent)];
            const long long d_total = sb.total - sa.total;
            if (d_total != d_own) {
              adj.counterexample.found = true;
              adj.counterexample.scenario = s;
              adj.counterexample.profile = profile_from_index(a, s.num_flights(), s.num_actions());
              adj.counterexample.deviation = profile_from_index(b, s.num_flights(), s.num_actions());
              adj.counterexample.agent = agent;
              adj.counterexample.delta_agent_overload = d_own;
              adj.counterexample.delta_total_overload = d_total;
              break;
            }
          }
          if (adj.counterexample.found) break;
        }
        if (adj.counterexample.found) break;
      }
    }
    if (adj.counterexample.found) break;
  }
  if (adj.counterexample.found) {
    adj.counterexample = shrink_counterexample(adj.counterexample);
    adj.report.note = "disputed";
  } else {
    adj.report.note = "certified";
  }
  return adj;
}

inline json adjudication_to_json(const KappaZeroAdjudication& adj) {
  json j = report_to_json(adj.report);
  j["status"] = adj.report.note;
  if (adj.counterexample.found) {
    j["counterexample"] = {
        {"scenario", scenario_to_json(adj.counterexample.scenario)},
        {"profile", adj.counterexample.profile},
        {"deviation", adj.counterexample.deviation},
        {"agent", adj.counterexample.agent},
        {"delta_agent_overload", adj.counterexample.delta_agent_overload},
        {"delta_total_overload", adj.counterexample.delta_total_overload}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Nash check.

// True when no agent has a strictly cost-improving unilateral deviation;
// with `restricted`, only deviations creating no new overload are considered.
inline bool check_nash(const Scenario& s, const ActionProfile& x, const Kappa& kappa,
                       bool restricted, long long cap = 1LL << 20) {
  validate_profile(s, x);
  const auto base_loads = sector_loads(s, x);
  long long base_total = 0;
  for (long long v : base_loads) base_total += v;

  const auto owners = owner_index(s);
  for (int agent = 0; agent < s.num_sectors(); ++agent) {
    const auto& mine = owners[static_cast<std::size_t>(agent)];
    if (mine.empty()) continue;
    long long space = 1;
    for (std::size_t k = 0; k < mine.size(); ++k) {
      space *= s.num_actions();
      if (space > cap)
        throw std::runtime_error("check_nash: per-agent space exceeds cap " + std::to_string(cap));
    }
    const long long base_own = base_loads[static_cast<std::size_t>(agent)];

    ActionProfile cand = x;
    std::vector<int> genes(mine.size(), 0);
    bool exhausted = false;
    while (!exhausted) {
      bool identity = true;
      for (std::size_t k = 0; k < mine.size(); ++k) {
        cand[static_cast<std::size_t>(mine[k])] = genes[k];
        if (genes[k] != x[static_cast<std::size_t>(mine[k])]) identity = false;
      }
      if (!identity) {
        const auto cand_loads = sector_loads(s, cand);
        bool allowed = true;
        if (restricted) {
          for (int j = 0; j < s.num_sectors() && allowed; ++j)
            if (base_loads[static_cast<std::size_t>(j)] == 0 &&
                cand_loads[static_cast<std::size_t>(j)] > 0)
              allowed = false;
        }
        if (allowed) {
          long long cand_total = 0;
          for (long long v : cand_loads) cand_total += v;
          const long long cand_own = cand_loads[static_cast<std::size_t>(agent)];
          bool improving;
          if (kappa.exact()) {
            improving = kappa.den * cand_own + kappa.num * (cand_total - cand_own) <
                        kappa.den * base_own + kappa.num * (base_total - base_own);
          } else {
            improving = static_cast<double>(cand_own) +
                            kappa.value * static_cast<double>(cand_total - cand_own) <
                        static_cast<double>(base_own) +
                            kappa.value * static_cast<double>(base_total - base_own);
          }
          if (improving) return false;
        }
      }
      std::size_t g = mine.size();
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
    for (std::size_t k = 0; k < mine.size(); ++k)
      cand[static_cast<std::size_t>(mine[k])] = x[static_cast<std::size_t>(mine[k])];
  }
  return true;
}

// ---------------------------------------------------------------------------
// Trace lemmas: overloaded-set chain, termination flag, potential descent.

inline bool is_subset(const std::vector<SectorId>& inner, const std::vector<SectorId>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline VerifierReport check_trace_lemmas(const Trace& t) {
  VerifierReport report;
  report.check = "trace-lemmas";
  report.instances = 1;
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const TraceStep& step = t.steps[k];
    ++report.deviations;
    const std::string tag = "step " + std::to_string(k);
    if (!step.accepted) {
      if (step.overloaded_before != step.overloaded_after)
        report.violations.push_back({0, tag + ": overloaded set changed without an accepted update"});
      continue;
    }
    if (!(step.cost_after < step.cost_before))
      report.violations.push_back({0, tag + ": accepted update without strict cost improvement"});
    if (!is_subset(step.overloaded_after, step.overloaded_before))
      report.violations.push_back({0, tag + ": overloaded set gained a sector"});
    const bool fixed_set = step.overloaded_before == step.overloaded_after;
    if ((t.kappa == 1.0 || fixed_set) && !(step.potential_after < step.potential_before))
      report.violations.push_back({0, tag + ": potential did not strictly decrease"});
  }
  if (t.reason == TerminationReason::step_limit)
    report.violations.push_back({0, "run hit the round safeguard instead of terminating"});
  return report;
}

// ---------------------------------------------------------------------------
// Self-prioritization: strictly below the kappa bound, no cost-improving
// deviation raises the deviator's own overload. With one bin, per-flight
// contributions are unit-valued and the bound is 1/(n(m-1)); with B bins a
// flight can move up to B aircraft-bins per sector, so the same counting
// argument gives 1/(n(m-1)B). kappa is set to 0.9 times the bound.

inline VerifierReport check_self_prioritization(const std::vector<std::uint64_t>& seeds,
                                                int bins = 1) {
  VerifierReport report;
  report.check = "self-prioritization";
  for (std::uint64_t seed : seeds) {
    const Scenario s = random_tiny(seed, bins);
    if (s.num_sectors() < 2 || s.num_flights() < 1) continue;
    const long long bound_den =
        10LL * s.num_flights() * (s.num_sectors() - 1) * s.num_bins();
    const Kappa kappa = Kappa::ratio(9, bound_den);
    const Enumeration e = enumerate_stats(s);
    ++report.instances;
    for (int agent = 0; agent < s.num_sectors(); ++agent) {
      for (const auto& [sig, idxs] : deviation_buckets(s, e, agent)) {
        for (long long a : idxs) {
          const auto& sa = e.stats[static_cast<std::size_t>(a)];
          for (long long b : idxs) {
            if (a == b) continue;
            ++report.deviations;
            const auto& sb = e.stats[static_cast<std::size_t>(b)];
            const long long d_own = sb.sector_load[static_cast<std::size_t>(agent)] -
                                    sa.sector_load[static_cast<std::size_t>(agent)];
            const long long d_total = sb.total - sa.total;
            if (d_own != 0 || d_total != 0) ++report.nonzero_deltas;
            const long long scaled_dj = kappa.den * d_own + kappa.num * (d_total - d_own);
            if (scaled_dj < 0 && d_own > 0)
              report.violations.push_back(
                  {seed, "agent " + std::to_string(agent) + " profile " + std::to_string(a) +
                             " -> " + std::to_string(b) +
                             ": improving deviation raised own overload by " +
                             std::to_string(d_own)});
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Feasibility <-> zero potential at full cooperation, checked against the
// implementation's potential() as a differential probe.

inline VerifierReport check_feasible_global_min(const std::vector<std::uint64_t>& seeds,
                                                int bins = 1) {
  VerifierReport report;
  report.check = "feasible-global-minimum";
  const Kappa one = Kappa::ratio(1, 1);
  for (std::uint64_t seed : seeds) {
    const Scenario s = random_tiny(seed, bins);
    const TotalOverloadMinimum mn = enumerate_min_total_overload(s);
    if (mn.min_value != 0) continue;  // no feasible profile on this instance
    ++report.instances;
    const long long size = joint_space_size(s, 1LL << 20);
    for (long long idx = 0; idx < size; ++idx) {
      ++report.deviations;
      const ActionProfile x = profile_from_index(idx, s.num_flights(), s.num_actions());
      const long long t = total_load(s, x);
      const double phi = potential(s, x, one);
      if (t == 0 && phi != 0.0)
        report.violations.push_back({seed, "feasible profile " + std::to_string(idx) +
                                               " has nonzero potential " + std::to_string(phi)});
      if (t > 0 && !(phi > 0.0))
        report.violations.push_back({seed, "infeasible profile " + std::to_string(idx) +
                                               " has non-positive potential"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// GA inner solver vs exhaustive best response on enumerable instances.

struct GaOracleStats {
  int runs = 0;
  int matched = 0;          // GA cost equals the exhaustive optimum
  int def3_violations = 0;  // GA result created a new overload
  int worsened = 0;         // GA result worse than the incumbent
};

inline GaOracleStats check_ga_matches_exhaustive(const std::vector<std::uint64_t>& seeds,
                                                 const GAConfig& base_ga, int bins = 3) {
  GaOracleStats stats;
  const double kappas[] = {0.0, 1e-6, 0.5, 1.0};
  for (std::uint64_t seed : seeds) {
    const Scenario s = random_tiny(seed, bins);
    Rng rng(derive_seed(seed, 0x6761636865636bull));
    ActionProfile x(static_cast<std::size_t>(s.num_flights()), 0);
    for (auto& g : x) g = rng.below(s.num_actions());
    std::vector<int> with_flights;
    for (int i = 0; i < s.num_sectors(); ++i)
      for (const Flight& f : s.flights)
        if (f.owner == i) {
          with_flights.push_back(i);
          break;
        }
    if (with_flights.empty()) continue;
    const SectorId agent = with_flights[static_cast<std::size_t>(rng.below(static_cast<int>(with_flights.size())))];
    const Kappa kappa{kappas[seed % 4]};

    GAConfig ga = base_ga;
    ga.seed = derive_seed(seed, 0x6761ull);
    const ActionProfile ga_result = best_response(s, x, agent, kappa, ga);
    const ActionProfile exact = exhaustive_best_response(s, x, agent, kappa);

    ++stats.runs;
    const double j_x = cost(s, x, agent, kappa);
    const double j_ga = cost(s, ga_result, agent, kappa);
    const double j_exact = cost(s, exact, agent, kappa);
    if (j_ga == j_exact) ++stats.matched;
    if (j_ga > j_x) ++stats.worsened;
    if (!new_overload_set(s, x, ga_result).empty()) ++stats.def3_violations;
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Differential check of the production load path against this file's
// independent recount.

inline VerifierReport check_loads_differential(const std::vector<std::uint64_t>& seeds) {
  VerifierReport report;
  report.check = "loads-differential";
  for (std::uint64_t seed : seeds) {
    for (int bins : {1, 3}) {
      const Scenario s = random_tiny(derive_seed(seed, static_cast<std::uint64_t>(bins)), bins);
      Rng rng(derive_seed(seed, 0x6469666600ull + static_cast<std::uint64_t>(bins)));
      ++report.instances;
      for (int rep = 0; rep < 8; ++rep) {
        ++report.deviations;
        ActionProfile x(static_cast<std::size_t>(s.num_flights()), 0);
        for (auto& g : x) g = rng.below(s.num_actions());
        const LoadTable t = compute_loads(s, x);
        const auto grid = grid_occupancy(s, x);
        const auto loads = sector_loads(s, x);
        if (t.occupancy != grid) {
          report.violations.push_back({seed, "occupancy grids differ"});
          continue;
        }
        for (int i = 0; i < s.num_sectors(); ++i)
          if (t.sector_overload[static_cast<std::size_t>(i)] != loads[static_cast<std::size_t>(i)])
            report.violations.push_back({seed, "sector overload differs at sector " + std::to_string(i)});
        const PotentialParts parts = potential_parts(s, x);
        long long own = 0;
        const auto st = stats_from_profile(s, x);
        own = st.own_sum;
        if (parts.own_sum != own || parts.total != st.total)
          report.violations.push_back({seed, "potential ingredients differ"});
      }
    }
  }
  return report;
}

}  // namespace atfm::oracle

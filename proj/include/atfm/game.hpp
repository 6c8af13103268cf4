#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "atfm/loads.hpp"
#include "atfm/scenario.hpp"

namespace atfm {

// Cooperativeness weight in [0, 1]. 0 = purely self-interested, 1 = fully
// cooperative. When built from a ratio the exact numerator/denominator are
// kept so verification code can work in integer arithmetic.
struct Kappa {
  double value = 0.0;
  long long num = 0;
  long long den = 0;  // > 0 iff exact

  Kappa() = default;

  explicit Kappa(double v) : value(v) { check(v); }

  static Kappa ratio(long long num, long long den) {
    if (den <= 0) throw std::invalid_argument("kappa: denominator must be positive");
    if (num < 0 || num > den) throw std::invalid_argument("kappa: ratio must lie in [0, 1]");
    Kappa k;
    k.value = static_cast<double>(num) / static_cast<double>(den);
    k.num = num;
    k.den = den;
    return k;
  }

  bool exact() const { return den > 0; }

 private:
  static void check(double v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("kappa: value " + std::to_string(v) + " outside [0, 1]");
  }
};

inline double cost_from_loads(const LoadTable& t, SectorId agent, const Kappa& kappa) {
  const long long own = t.sector_overload[static_cast<std::size_t>(agent)];
  const long long others = t.total_overload - own;
  return static_cast<double>(own) + kappa.value * static_cast<double>(others);
}

// Sector cost: own overload plus kappa times everyone else's.
inline double cost(const Scenario& s, const ActionProfile& x, SectorId agent, const Kappa& kappa) {
  if (agent < 0 || agent >= s.num_sectors())
    throw std::invalid_argument("cost: sector id out of range");
  return cost_from_loads(compute_loads(s, x), agent, kappa);
}

// Integer ingredients of the potential: total overload and the sum, over
// overloaded (sector, bin) resources, of the owning sector's contribution to
// that resource. potential = kappa*total + (1-kappa)*own_sum. With one bin
// per horizon the second term reduces to the per-sector own contributions of
// the overloaded sectors.
struct PotentialParts {
  long long total = 0;
  long long own_sum = 0;
};

inline PotentialParts potential_parts(const Scenario& s, const ActionProfile& x) {
  const LoadTable t = compute_loads(s, x);
  const std::vector<int> own = own_contribution_grid(s, x);
  PotentialParts parts;
  parts.total = t.total_overload;
  for (const auto& [sec, bin] : t.overloaded_resources)
    parts.own_sum += own[static_cast<std::size_t>(sec) * static_cast<std::size_t>(t.num_bins) +
                         static_cast<std::size_t>(bin)];
  return parts;
}

inline double potential_from_parts(const PotentialParts& p, const Kappa& kappa) {
  return kappa.value * static_cast<double>(p.total) +
         (1.0 - kappa.value) * static_cast<double>(p.own_sum);
}

inline double potential(const Scenario& s, const ActionProfile& x, const Kappa& kappa) {
  return potential_from_parts(potential_parts(s, x), kappa);
}

struct DeviationDelta {
  SectorId agent = 0;
  double delta_cost = 0.0;
  double delta_potential = 0.0;
  bool overload_set_fixed = true;     // same overloaded sectors before/after
  bool resource_overload_set_fixed = true;  // same overloaded (sector, bin) pairs
};

inline DeviationDelta deviation_delta(const Scenario& s, const ActionProfile& x,
                                      const ActionProfile& x_dev, SectorId agent,
                                      const Kappa& kappa) {
  if (agent < 0 || agent >= s.num_sectors())
    throw std::invalid_argument("deviation_delta: sector id out of range");
  const auto owners = deviating_sectors(s, x, x_dev);
  if (owners.size() > 1 || (owners.size() == 1 && owners[0] != agent))
    throw std::invalid_argument("deviation_delta: profiles differ outside the agent's flights");

  const LoadTable before = compute_loads(s, x);
  const LoadTable after = compute_loads(s, x_dev);
  DeviationDelta d;
  d.agent = agent;
  d.delta_cost = cost_from_loads(after, agent, kappa) - cost_from_loads(before, agent, kappa);
  d.delta_potential = potential(s, x_dev, kappa) - potential(s, x, kappa);
  d.overload_set_fixed = before.overloaded_sectors == after.overloaded_sectors;
  d.resource_overload_set_fixed = before.overloaded_resources == after.overloaded_resources;
  return d;
}

// Sufficient kappa bound below which no sector ever accepts an action that
// increases its own overload (single-window counting argument).
inline double self_prioritization_bound(long long flight_count, long long sector_count) {
  if (sector_count < 2)
    throw std::invalid_argument("self_prioritization_bound: needs at least two sectors");
  if (flight_count < 1)
    throw std::invalid_argument("self_prioritization_bound: needs at least one flight");
  return 1.0 / (static_cast<double>(flight_count) * static_cast<double>(sector_count - 1));
}

}  // namespace atfm

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "atfm/loads.hpp"
#include "atfm/scenario.hpp"
#include "atfm/util.hpp"

namespace atfm {

enum class Adjacency { ring, grid, complete };

struct CapacityRule {
  enum class Kind { uniform, headroom } kind = Kind::uniform;
  int uniform_capacity = 10;
  double headroom = 0.85;  // capacity = floor(headroom * zero-delay peak occupancy), min 1

  static CapacityRule uniform(int d) { return {Kind::uniform, d, 0.0}; }
  static CapacityRule from_headroom(double rho) { return {Kind::headroom, 0, rho}; }
};

struct DemandPeaks {
  int count = 2;
  int width_minutes = 120;
};

struct GenParams {
  int num_sectors = 4;
  int num_flights = 20;
  int horizon = 1440;
  int bin_width = 15;
  CapacityRule capacity;
  int route_min = 1;
  int route_max = 3;
  int transit_min = 10;
  int transit_max = 20;
  DemandPeaks peaks;
  Adjacency adjacency = Adjacency::ring;
  std::vector<int> action_set = {0, 5, 10, 15, 20, 25, 30};
  std::uint64_t seed = 1;

  void validate() const {
    if (num_sectors < 1) throw std::invalid_argument("generate: need at least one sector");
    if (num_flights < 0) throw std::invalid_argument("generate: flight count must be nonnegative");
    if (route_min < 1 || route_max < route_min)
      throw std::invalid_argument("generate: route length range is empty");
    if (transit_min < 1 || transit_max < transit_min)
      throw std::invalid_argument("generate: transit time range is empty");
    if (peaks.count < 1 || peaks.width_minutes < 1)
      throw std::invalid_argument("generate: demand peaking must name at least one positive-width peak");
    if (capacity.kind == CapacityRule::Kind::uniform && capacity.uniform_capacity < 1)
      throw std::invalid_argument("generate: uniform capacity must be positive");
    if (capacity.kind == CapacityRule::Kind::headroom &&
        !(capacity.headroom > 0.0 && capacity.headroom <= 1.5))
      throw std::invalid_argument("generate: headroom fraction out of range");
  }
};

namespace detail {

inline std::vector<std::vector<int>> adjacency_lists(int m, Adjacency kind) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
  if (m == 1) return adj;
  switch (kind) {
    case Adjacency::ring:
      for (int i = 0; i < m; ++i) {
        const int a = (i + 1) % m;
        const int b = (i + m - 1) % m;
        adj[static_cast<std::size_t>(i)].push_back(a);
        if (b != a) adj[static_cast<std::size_t>(i)].push_back(b);
      }
      break;
    case Adjacency::grid: {
      int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(m))));
      rows = std::max(rows, 1);
      const int cols = (m + rows - 1) / rows;
      for (int i = 0; i < m; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        auto push = [&](int rr, int cc) {
          const int j = rr * cols + cc;
          if (rr >= 0 && cc >= 0 && cc < cols && j < m && j != i)
            adj[static_cast<std::size_t>(i)].push_back(j);
        };
        push(r, c - 1);
        push(r, c + 1);
        push(r - 1, c);
        push(r + 1, c);
      }
      // isolated tail cells can occur when m is not a multiple of cols
      for (int i = 0; i < m; ++i)
        if (adj[static_cast<std::size_t>(i)].empty())
          adj[static_cast<std::size_t>(i)].push_back((i + 1) % m);
      break;
    }
    case Adjacency::complete:
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (j != i) adj[static_cast<std::size_t>(i)].push_back(j);
      break;
  }
  return adj;
}

inline int sample_departure(Rng& rng, const DemandPeaks& peaks, int horizon, int window_max) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int peak = rng.below(peaks.count);
    const double center =
        static_cast<double>(horizon) * static_cast<double>(peak + 1) / static_cast<double>(peaks.count + 1);
    const int t = static_cast<int>(std::lround(rng.normal(center, peaks.width_minutes)));
    if (t >= 0 && t <= window_max) return t;
  }
  return rng.below(window_max + 1);
}

}  // namespace detail

// Synthetic scenario with controllable congestion. Flights follow adjacency
// walks, the first route sector controls the flight, and departures cluster
// around evenly spaced demand peaks. With the headroom capacity rule the
// zero-delay schedule is guaranteed congested (the generator retries and
// finally raises when it is not).
inline Scenario generate(const GenParams& params) {
  params.validate();
  Rng rng(params.seed);
  const auto adj = detail::adjacency_lists(params.num_sectors, params.adjacency);
  const int max_delay = params.action_set.empty() ? 0 : params.action_set.back();

  const int attempts = params.capacity.kind == CapacityRule::Kind::headroom ? 20 : 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Scenario s;
    s.horizon = params.horizon;
    s.bin_width = params.bin_width;
    s.action_set = params.action_set;
    s.capacities.assign(static_cast<std::size_t>(params.num_sectors), 1);

    for (int f = 0; f < params.num_flights; ++f) {
      Flight fl;
      fl.id = f;
      int route_len = rng.between(params.route_min, params.route_max);
      route_len = std::min(route_len, std::max(1, params.num_sectors));
      std::vector<int> route;
      route.push_back(rng.below(params.num_sectors));
      while (static_cast<int>(route.size()) < route_len) {
        const auto& nb = adj[static_cast<std::size_t>(route.back())];
        if (nb.empty()) break;
        int next = nb[static_cast<std::size_t>(rng.below(static_cast<int>(nb.size())))];
        if (nb.size() > 1 && route.size() >= 2 && next == route[route.size() - 2])
          next = nb[static_cast<std::size_t>(rng.below(static_cast<int>(nb.size())))];
        route.push_back(next);
      }
      fl.owner = route.front();
      int t = 0;
      for (int sec : route) {
        const int transit = rng.between(params.transit_min, params.transit_max);
        fl.segments.push_back({sec, t, t + transit});
        t += transit;
      }
      const int window_max = params.horizon - t - max_delay;
      if (window_max < 0)
        throw std::runtime_error(
            "generate: route duration " + std::to_string(t) + " + max delay " +
            std::to_string(max_delay) + " exceeds horizon " + std::to_string(params.horizon));
      fl.base_departure = detail::sample_departure(rng, params.peaks, params.horizon, window_max);
      s.flights.push_back(std::move(fl));
    }

    if (params.capacity.kind == CapacityRule::Kind::uniform) {
      s.capacities.assign(static_cast<std::size_t>(params.num_sectors),
                          params.capacity.uniform_capacity);
      s.validate();
      return s;
    }

    // headroom rule: capacity from the zero-delay occupancy peak
    const LoadTable zero = compute_loads(s, zero_profile(s));
    int peak = 0;
    for (int v : zero.occupancy) peak = std::max(peak, v);
    const int cap = std::max(1, static_cast<int>(std::floor(params.capacity.headroom *
                                                            static_cast<double>(peak))));
    s.capacities.assign(static_cast<std::size_t>(params.num_sectors), cap);
    if (compute_loads(s, zero_profile(s)).total_overload > 0) {
      s.validate();
      return s;
    }
    // demand produced no congestion; resample the flight set
  }
  throw std::runtime_error(
      "generate: headroom rule produced no zero-delay congestion after retries; "
      "raise demand peaking or flight count");
}

// Named parameter sets for the shipped experiment families.
inline GenParams preset(const std::string& name) {
  GenParams p;
  if (name == "brest-like") {
    p.num_sectors = 28;
    p.num_flights = 1247;
    p.horizon = 1440;
    p.bin_width = 15;
    p.capacity = CapacityRule::uniform(10);
    p.route_min = 2;
    p.route_max = 5;
    p.transit_min = 8;
    p.transit_max = 22;
    p.peaks = {3, 110};
    p.adjacency = Adjacency::grid;
    p.action_set = {0, 5, 10, 15, 20, 25, 30};
  } else if (name == "brest-like-d7") {
    p = preset("brest-like");
    p.capacity = CapacityRule::uniform(7);
  } else if (name == "brest-like-headroom") {
    p = preset("brest-like");
    p.capacity = CapacityRule::from_headroom(0.90);
  } else if (name == "europe-like") {
    p.num_sectors = 12;
    p.num_flights = 1000;
    p.horizon = 1440;
    p.bin_width = 15;
    p.capacity = CapacityRule::from_headroom(0.85);
    p.route_min = 1;
    p.route_max = 3;
    p.transit_min = 25;
    p.transit_max = 70;
    p.peaks = {3, 150};
    p.adjacency = Adjacency::complete;
    p.action_set = {0, 5, 10, 15, 20, 25, 30};
  } else if (name == "tiny") {
    p.num_sectors = 3;
    p.num_flights = 5;
    p.horizon = 12;
    p.bin_width = 4;
    p.capacity = CapacityRule::uniform(1);
    p.route_min = 1;
    p.route_max = 3;
    p.transit_min = 2;
    p.transit_max = 3;  // three segments plus the largest delay still fit
    p.peaks = {1, 4};
    p.adjacency = Adjacency::complete;
    p.action_set = {0, 1, 2};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return p;
}

inline std::vector<std::string> preset_names() {
  return {"brest-like", "brest-like-d7", "brest-like-headroom", "europe-like", "tiny"};
}

// Small random instance inside the exhaustively checkable bounds
// (m <= 4, n <= 6, p <= 3, joint space <= 3^6). `bins` is 1 or 3.
inline Scenario random_tiny(std::uint64_t seed, int bins = 1) {
  if (bins != 1 && bins != 3) throw std::invalid_argument("random_tiny: bins must be 1 or 3");
  Rng rng(derive_seed(seed, 0x74696e79ull));
  Scenario s;
  s.horizon = 12;
  s.bin_width = s.horizon / bins;
  const int m = rng.between(2, 4);
  const int n = rng.between(1, 6);
  const int p = rng.between(2, 3);
  s.action_set.clear();
  for (int k = 0; k < p; ++k) s.action_set.push_back(k);
  s.capacities.clear();
  for (int i = 0; i < m; ++i) s.capacities.push_back(rng.between(1, 2));

  for (int f = 0; f < n; ++f) {
    Flight fl;
    fl.id = f;
    const int route_len = rng.between(1, std::min(3, m));
    std::vector<int> route;
    route.push_back(rng.below(m));
    while (static_cast<int>(route.size()) < route_len) {
      int next = rng.below(m);
      if (next == route.back()) next = (next + 1) % m;
      route.push_back(next);
    }
    fl.owner = route.front();
    int t = 0;
    for (int sec : route) {
      const int transit = rng.between(2, 3);  // 3 segments + max delay still fit the horizon
      fl.segments.push_back({sec, t, t + transit});
      t += transit;
    }
    const int window_max = s.horizon - t - s.action_set.back();
    fl.base_departure = window_max > 0 ? rng.below(window_max + 1) : 0;
    s.flights.push_back(std::move(fl));
  }
  s.validate();
  return s;
}

}  // namespace atfm

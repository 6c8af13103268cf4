#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "atfm/dynamics.hpp"
#include "atfm/scenario.hpp"

namespace atfm {

using nlohmann::json;

namespace detail {

inline const json& require_field(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw std::runtime_error("scenario parse error at " + where + ": missing '" + key + "'");
  return *it;
}

inline int require_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = require_field(j, key, where);
  if (!v.is_number_integer())
    throw std::runtime_error("scenario parse error at " + where + "/" + key + ": expected an integer");
  return v.get<int>();
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

inline json scenario_to_json(const Scenario& s) {
  json j;
  j["horizon"] = s.horizon;
  j["bin_width"] = s.bin_width;
  j["action_set"] = s.action_set;
  j["sectors"] = json::array();
  for (int i = 0; i < s.num_sectors(); ++i)
    j["sectors"].push_back({{"id", i}, {"capacity", s.capacities[static_cast<std::size_t>(i)]}});
  j["flights"] = json::array();
  for (const Flight& f : s.flights) {
    json jf;
    jf["id"] = f.id;
    jf["owner"] = f.owner;
    jf["base_departure"] = f.base_departure;
    jf["segments"] = json::array();
    for (const auto& seg : f.segments)
      jf["segments"].push_back(
          {{"sector", seg.sector}, {"entry", seg.entry_offset}, {"exit", seg.exit_offset}});
    j["flights"].push_back(std::move(jf));
  }
  return j;
}

inline Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.horizon = detail::require_int(j, "horizon", "");
  s.bin_width = detail::require_int(j, "bin_width", "");
  const json& actions = detail::require_field(j, "action_set", "");
  if (!actions.is_array()) throw std::runtime_error("scenario parse error at /action_set: expected an array");
  for (const auto& a : actions) s.action_set.push_back(a.get<int>());

  const json& sectors = detail::require_field(j, "sectors", "");
  if (!sectors.is_array()) throw std::runtime_error("scenario parse error at /sectors: expected an array");
  s.capacities.assign(sectors.size(), 0);
  for (std::size_t k = 0; k < sectors.size(); ++k) {
    const std::string where = "/sectors/" + std::to_string(k);
    const int id = detail::require_int(sectors[k], "id", where);
    if (id < 0 || id >= static_cast<int>(sectors.size()))
      throw std::runtime_error("scenario parse error at " + where + "/id: ids must be dense and 0-based");
    s.capacities[static_cast<std::size_t>(id)] = detail::require_int(sectors[k], "capacity", where);
  }

  const json& flights = detail::require_field(j, "flights", "");
  if (!flights.is_array()) throw std::runtime_error("scenario parse error at /flights: expected an array");
  for (std::size_t k = 0; k < flights.size(); ++k) {
    const std::string where = "/flights/" + std::to_string(k);
    Flight f;
    f.id = detail::require_int(flights[k], "id", where);
    f.owner = detail::require_int(flights[k], "owner", where);
    f.base_departure = detail::require_int(flights[k], "base_departure", where);
    const json& segs = detail::require_field(flights[k], "segments", where);
    if (!segs.is_array()) throw std::runtime_error("scenario parse error at " + where + "/segments: expected an array");
    for (std::size_t q = 0; q < segs.size(); ++q) {
      const std::string swhere = where + "/segments/" + std::to_string(q);
      TrajectorySegment seg;
      seg.sector = detail::require_int(segs[q], "sector", swhere);
      seg.entry_offset = detail::require_int(segs[q], "entry", swhere);
      seg.exit_offset = detail::require_int(segs[q], "exit", swhere);
      f.segments.push_back(seg);
    }
    s.flights.push_back(std::move(f));
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("scenario parse error: " + std::string(e.what()));
  }
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scenario_to_json(s).dump(2) << '\n';
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("scenario parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

// Flight-plan CSV: one row per trajectory segment,
//   flight_id,owner_sector,base_departure,sector,entry_offset,exit_offset
// Capacities, horizon, bin width and the action set are supplied by the
// caller since the plan file carries flights only.
inline Scenario scenario_from_csv(const std::string& path, std::vector<int> capacities,
                                  int horizon, int bin_width, std::vector<int> action_set) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);

  struct Row {
    int flight, owner, departure, sector, entry, exit;
  };
  std::vector<Row> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (lineno == 1 && !cells.empty() && cells[0] == "flight_id") continue;  // header
    if (cells.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 6 columns, got " +
                               std::to_string(cells.size()));
    try {
      rows.push_back({std::stoi(cells[0]), std::stoi(cells[1]), std::stoi(cells[2]),
                      std::stoi(cells[3]), std::stoi(cells[4]), std::stoi(cells[5])});
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric cell");
    }
  }

  int max_flight = -1;
  for (const Row& r : rows) max_flight = std::max(max_flight, r.flight);
  Scenario s;
  s.horizon = horizon;
  s.bin_width = bin_width;
  s.action_set = std::move(action_set);
  s.capacities = std::move(capacities);
  s.flights.resize(static_cast<std::size_t>(max_flight + 1));
  for (int f = 0; f <= max_flight; ++f) {
    s.flights[static_cast<std::size_t>(f)].id = f;
    s.flights[static_cast<std::size_t>(f)].owner = -1;
  }
  for (const Row& r : rows) {
    Flight& f = s.flights[static_cast<std::size_t>(r.flight)];
    if (f.owner >= 0 && (f.owner != r.owner || f.base_departure != r.departure))
      throw std::runtime_error(path + ": flight " + std::to_string(r.flight) +
                               " has inconsistent owner or departure across rows");
    f.owner = r.owner;
    f.base_departure = r.departure;
    f.segments.push_back({r.sector, r.entry, r.exit});
  }
  for (Flight& f : s.flights) {
    if (f.owner < 0)
      throw std::runtime_error(path + ": flight ids must be dense, flight " +
                               std::to_string(f.id) + " has no rows");
    std::sort(f.segments.begin(), f.segments.end(),
              [](const TrajectorySegment& a, const TrajectorySegment& b) {
                return a.entry_offset < b.entry_offset;
              });
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return s;
}

inline json trace_to_json(const Trace& t) {
  json j;
  j["kappa"] = t.kappa;
  j["solver"] = t.solver == BestResponseSolver::ga ? "ga" : "exhaustive";
  j["termination_reason"] = to_string(t.reason);
  j["initial_overload"] = t.initial_overload;
  j["final_overload"] = t.final_overload;
  j["rounds_used"] = t.rounds_used;
  j["accepted_steps"] = t.accepted_steps;
  j["terminal_profile"] = t.terminal_profile;
  j["steps"] = json::array();
  for (const TraceStep& s : t.steps) {
    j["steps"].push_back({{"round", s.round},
                          {"agent", s.agent},
                          {"accepted", s.accepted},
                          {"cost_before", s.cost_before},
                          {"cost_after", s.cost_after},
                          {"potential_before", s.potential_before},
                          {"potential_after", s.potential_after},
                          {"overloaded_before", s.overloaded_before},
                          {"overloaded_after", s.overloaded_after},
                          {"total_overload_after", s.total_overload_after},
                          {"duration_seconds", s.duration_seconds}});
  }
  return j;
}

inline void write_trace_json(const Trace& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << trace_to_json(t).dump(2) << '\n';
}

inline std::string join_ids(const std::vector<SectorId>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += '|';
    s += std::to_string(v[k]);
  }
  return s;
}

// One row per best-response step, flat for plotting convergence curves.
inline void write_trace_csv(const Trace& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,round,agent,accepted,cost_before,cost_after,potential_before,potential_after,"
         "total_overload_after,overloaded_before,overloaded_after,duration_seconds\n";
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const TraceStep& s = t.steps[k];
    out << k << ',' << s.round << ',' << s.agent << ',' << (s.accepted ? 1 : 0) << ','
        << detail::fmt_double(s.cost_before) << ',' << detail::fmt_double(s.cost_after) << ','
        << detail::fmt_double(s.potential_before) << ',' << detail::fmt_double(s.potential_after)
        << ',' << s.total_overload_after << ',' << join_ids(s.overloaded_before) << ','
        << join_ids(s.overloaded_after) << ',' << detail::fmt_double(s.duration_seconds) << '\n';
  }
}

}  // namespace atfm

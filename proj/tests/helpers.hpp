#pragma once

#include "atfm/scenario.hpp"

namespace atfm::test {

// Two sectors with capacity 1, two flights controlled by sector 0, both in
// sector 0 during [0, 5); horizon 15, bins of 5, delays {0, 5}.
inline Scenario tiny1() {
  Scenario s;
  s.capacities = {1, 1};
  s.horizon = 15;
  s.bin_width = 5;
  s.action_set = {0, 5};
  s.flights = {
      {0, 0, 0, {{0, 0, 5}}},
      {1, 0, 0, {{0, 0, 5}}},
  };
  s.validate();
  return s;
}

}  // namespace atfm::test

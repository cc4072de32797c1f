#pragma once

#include <vector>

// One experience tuple for Q-learning.

namespace ntn {

struct Transition {
  std::vector<double> s;       // observation
  int a = 0;                   // action index
  double r = 0;                // reward, in (0, 1)
  std::vector<double> s_next;  // successor observation
  bool done = false;           // episode boundary: no bootstrapping past it
};

}  // namespace ntn

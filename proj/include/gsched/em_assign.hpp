#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gsched/conflict_graph.hpp"
#include "gsched/stability.hpp"

namespace gsched {

// State of the two-priority assignment heuristic. `t` is twice the worse of
// the two block norms, the quantity the M-step minimizes; trace holds the t
// value recorded after every E- and M-step (non-increasing).
struct EMState {
  std::vector<double> x;
  PriorityVector p1{std::vector<int>{1}};
  PriorityVector p2{std::vector<int>{1}};
  double t = 0.0;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;

  // t < 1 certifies the rate is stabilizable by SP-2 with theta = (1/2, 1/2).
  bool stable() const { return t < 1.0; }
};

struct EStepResult {
  PriorityVector p1;
  PriorityVector p2;
  double objective = 0.0;  // max of the two minimized norms
};

// E-step: best priorities for a fixed split, each side independently.
EStepResult e_step(const ConflictGraph& g, std::span<const double> x,
                   std::span<const double> rates);

// M-step: best split for fixed priorities, the LP
//   min t  s.t.  P1 x <= (t/2) 1,  P2 (a - x) <= (t/2) 1,  0 <= x <= a.
std::pair<std::vector<double>, double> m_step(const ConflictGraph& g,
                                              const PriorityVector& p1,
                                              const PriorityVector& p2,
                                              std::span<const double> rates);

// Alternates E- and M-steps from x0 = a/2 until the t sequence settles.
// restarts > 0 adds seeded random initial splits; the best final t wins
// (ties: the earliest start).
EMState em_assign(const ConflictGraph& g, std::span<const double> rates,
                  double tol = 1e-6, int max_iter = 100, int restarts = 0,
                  std::uint64_t seed = 1);

}  // namespace gsched

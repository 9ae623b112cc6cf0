#pragma once

#include <functional>

#include "stochroute/lp.hpp"

namespace stochroute {

// Maps an integer-feasible point to zero or more violated rows. Must be a
// pure function of the queried point; returned rows are checked for actual
// violation and added globally.
using LazyHook = std::function<std::vector<LinearProgram::Row>(const std::vector<double>&)>;

struct MipOptions {
  double time_limit_s = 3600.0;  // per-solve wall clock budget
  double gap_tol = 1e-9;         // relative optimality gap target
  double int_tol = 1e-6;
  int64_t node_limit = 10'000'000;
  // optional feasible point used as the starting incumbent (validated)
  std::vector<double> warm_start;
  // optional per-variable priority mask: most-fractional branching picks
  // among flagged variables first (first-stage-first for two-stage models)
  std::vector<uint8_t> branch_priority;
};

// Branch and bound over LP relaxations: most-fractional branching (ties by
// lowest index), best-bound node selection (ties by node id). Every
// integer-feasible point is offered to the hook before acceptance.
// On time/node limit the best incumbent is returned with its proven gap.
LpSolution solve_mip(const LinearProgram& lp, const LazyHook& hook = nullptr,
                     const MipOptions& opts = {});

}  // namespace stochroute

#pragma once

#include <string>
#include <vector>

#include "stochroute/formulation_profit.hpp"
#include "stochroute/instance.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute {

// One aggregated dual-based cut: theta - sum(coef * var) <= rhs, valid for
// every master-feasible (x, z) by LP weak duality of the scenario recourses.
struct OptimalityCut {
  LinearProgram::Row row;
  int iteration = 0;
};

struct BoundsTraceEntry {
  int iteration = 0;
  double lb = 0.0;
  double ub = 0.0;
  double cut_violation = 0.0;  // theta overestimate repaired this iteration
  double seconds = 0.0;
};

struct LShapedOptions {
  double eps = 1e-4;           // stop when ub - lb < eps * |ub|
  int max_iterations = 500;
  double time_limit_s = 3600.0;
  MipOptions master;           // per-master-solve options
  bool audit_cuts = true;      // re-check each cut at its generating point
};

struct LShapedResult {
  TwoStageSolveResult solve;
  std::vector<BoundsTraceEntry> trace;
  std::vector<OptimalityCut> cuts;
  double lb = -kInf;
  double ub = kInf;
  bool converged = false;
  std::string stop_reason;
};

// Single-cut decomposition for the profit formulation: master MIP over
// (x, z, theta) with lazy subtour separation, scenario recourses solved as
// LPs, one probability-aggregated optimality cut per iteration, incumbent
// tracked by true two-stage value.
LShapedResult run_lshaped(const Instance& inst, const ScenarioSet& scenarios,
                          ProfitVariant variant, const LShapedOptions& opts = {});

// Builds the aggregated cut from the per-scenario recourse duals. The
// reported master point is used for a validity audit (the cut must be tight
// at its generating point). Throws if any scenario solution is not optimal.
OptimalityCut make_single_cut(const Instance& inst, const ScenarioSet& scenarios,
                              const std::vector<ProfitRecourse>& recourses,
                              const std::vector<LpSolution>& duals,
                              const ProfitFirstStage& master, int theta_var,
                              int iteration,
                              const std::vector<std::vector<double>>& at_x, bool audit);

// Sweep helper: re-solves to the same optimal value while minimizing the
// given vehicle's first-stage profit (resolves ties, e.g. at availability 0
// where the swept vehicle's net contribution is exactly zero).
LShapedResult run_lshaped_lex_min_vehicle(const Instance& inst, const ScenarioSet& scenarios,
                                          ProfitVariant variant, int vehicle,
                                          const LShapedOptions& opts = {});

std::string bounds_trace_csv(const std::vector<BoundsTraceEntry>& trace);

}  // namespace stochroute

#pragma once

#include <vector>

#include "stochroute/formulation_profit.hpp"  // TwoStageSolveResult
#include "stochroute/instance.hpp"
#include "stochroute/lp.hpp"
#include "stochroute/mip.hpp"
#include "stochroute/routes.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute {

// First-stage objective coefficient source: nominal fuel (default) or the
// per-arc travel cost.
enum class CostSource { nominal_fuel, travel_cost };

struct MinFirstStage {
  LinearProgram lp;
  std::vector<std::vector<int>> x_idx;  // [vehicle][V*V] -> var or -1
  std::vector<std::vector<int>> z_idx;
};

// Minimize first-stage travel (every POI visited exactly once across the
// fleet) subject to degree, fuel-flow and capacity rows. Connectivity is
// served by the lazy subtour hook, not upfront rows.
MinFirstStage build_first_stage_min(const Instance& inst,
                                    CostSource cost_source = CostSource::nominal_fuel);

// Second-stage rerouting program for one scenario at fixed x: binary y
// rebuilds full routes under realized fuels and ybar >= y - x prices only
// the added arcs. Solved as a MIP with its own subtour hook.
struct MinRecourse {
  LinearProgram lp;
  std::vector<std::vector<int>> y_idx, ybar_idx, zbar_idx;
};
MinRecourse build_recourse_min(const Instance& inst, const FirstStageSolution& fs,
                               const Scenario& sc);

struct MinRecourseValue {
  double value = 0.0;
  std::vector<std::vector<uint8_t>> y;  // chosen second-stage arcs
  LpSolution::Status status = LpSolution::Status::infeasible;
};
MinRecourseValue recourse_value_min(const Instance& inst, const FirstStageSolution& fs,
                                    const Scenario& sc, const MipOptions& opts = {});

// Deterministic equivalent: first stage plus one weighted (y, ybar, zbar)
// block per scenario; the subtour hook covers x and every y block. Refuses
// |scenarios|*|arcs|*|vehicles| above size_cap.
struct MinExtensive {
  LinearProgram lp;
  std::vector<std::vector<int>> x_idx, z_idx;
  std::vector<std::vector<std::vector<int>>> y_idx, ybar_idx;  // [scenario][vehicle][V*V]
};
MinExtensive build_extensive_min(const Instance& inst, const ScenarioSet& scenarios,
                                 CostSource cost_source = CostSource::nominal_fuel,
                                 int size_cap = 2000);

TwoStageSolveResult solve_min_extensive(const Instance& inst, const ScenarioSet& scenarios,
                                        CostSource cost_source = CostSource::nominal_fuel,
                                        const MipOptions& opts = {}, int size_cap = 2000);

// First-stage cost of a solution under the chosen cost source.
double first_stage_cost(const Instance& inst, const FirstStageSolution& fs,
                        CostSource cost_source = CostSource::nominal_fuel);

}  // namespace stochroute

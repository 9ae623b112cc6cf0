#pragma once

#include <vector>

#include "stochroute/instance.hpp"
#include "stochroute/lp.hpp"
#include "stochroute/mip.hpp"
#include "stochroute/routes.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute {

// TS maximizes collected POI profits under routing/fuel-flow constraints;
// TS-OP adds the per-vehicle fuel knapsack row, the orienteering variant.
enum class ProfitVariant { ts, ts_op };

// First-stage program. Depot-outgoing flow variables are substituted out
// (z_di = nominal_fuel * x_di), so z variables exist only on POI-outgoing
// arcs; decode() reconstructs the full z map.
struct ProfitFirstStage {
  LinearProgram lp;
  std::vector<std::vector<int>> x_idx;  // [vehicle][V*V] -> var index or -1
  std::vector<std::vector<int>> z_idx;  // [vehicle][V*V] -> var index or -1
  double max_total_profit = 0.0;        // sum over POIs of best per-vehicle profit
};

ProfitFirstStage build_first_stage_profit(const Instance& inst, ProfitVariant variant);

FirstStageSolution decode_first_stage(const Instance& inst,
                                      const std::vector<std::vector<int>>& x_idx,
                                      const std::vector<std::vector<int>>& z_idx,
                                      const std::vector<double>& sol, double objective);

// First-stage collected profit per vehicle (sum of profits on POI-entering
// selected arcs).
std::vector<double> per_vehicle_profit(const Instance& inst, const FirstStageSolution& fs);
double first_stage_profit(const Instance& inst, const FirstStageSolution& fs);

// Continuous recourse for one scenario at fixed first-stage (x, z): v in
// [0,1] repairs the flow system under the scenario's availability/fuel, and
// the objective books the lost profit (always <= 0). Row bookkeeping is kept
// for dual-based cut assembly.
struct ProfitRecourse {
  LinearProgram lp;
  std::vector<std::vector<int>> v_idx;  // [vehicle][V*V] -> var index or -1
  struct FlowRow { int row, poi, m; };       // flow-difference balance rows
  struct LinkRow { int row, from, to, m; };  // v <= x rows
  struct DepotRow { int row, d, i, m; };     // depot initialization rows
  std::vector<FlowRow> flow_rows;
  std::vector<LinkRow> link_rows;
  std::vector<DepotRow> depot_rows;
};

ProfitRecourse build_recourse_profit(const Instance& inst, const FirstStageSolution& fs,
                                     const Scenario& sc);
// Same program with fractional first-stage arc values (used to price cuts
// at interior points).
ProfitRecourse build_recourse_profit_at(const Instance& inst,
                                        const std::vector<std::vector<double>>& x,
                                        const Scenario& sc);

// Recourse value beta(x,z,omega) by LP; throws if the LP is not optimal
// (unreachable under availability-only scenario sets).
double recourse_value_profit(const Instance& inst, const FirstStageSolution& fs,
                             const Scenario& sc);

// Solves the recourse once relaxed and once with binary v and reports both
// objective values; `equal` within 1e-6 is the expected outcome.
struct TightnessReport {
  double lp_value = 0.0;
  double mip_value = 0.0;
  bool equal = false;
  bool mip_feasible = true;
  double max_fractionality = 0.0;  // of the relaxed basic optimum
};
TightnessReport verify_relaxation_tightness(const Instance& inst,
                                            const FirstStageSolution& fs,
                                            const Scenario& sc);

// Deterministic-equivalent program: first stage plus one weighted recourse
// block per scenario.
struct ProfitExtensive {
  LinearProgram lp;
  std::vector<std::vector<int>> x_idx, z_idx;
  std::vector<std::vector<std::vector<int>>> v_idx;  // [scenario][vehicle][V*V]
};
ProfitExtensive build_extensive_profit(const Instance& inst, const ScenarioSet& scenarios,
                                       ProfitVariant variant, int size_cap = 2000);

struct TwoStageSolveResult {
  LpSolution::Status status = LpSolution::Status::infeasible;
  double objective = 0.0;
  FirstStageSolution first_stage;
  RouteSet routes;
  std::vector<double> per_scenario_beta;
  std::vector<double> vehicle_profit;  // profit formulation only
  double gap = 0.0;
  int64_t nodes = 0;
  int iterations = 0;  // decomposition iterations when applicable

  bool has_solution() const {
    return status == LpSolution::Status::optimal || status == LpSolution::Status::feasible;
  }
};

// Extensive-form solve with the lazy subtour hook on the first-stage block.
TwoStageSolveResult solve_profit_extensive(const Instance& inst, const ScenarioSet& scenarios,
                                           ProfitVariant variant, const MipOptions& opts = {},
                                           int size_cap = 2000);

// Deterministic solve (nominal fuels, everyone available).
TwoStageSolveResult solve_profit_deterministic(const Instance& inst, ProfitVariant variant,
                                               const MipOptions& opts = {});

}  // namespace stochroute

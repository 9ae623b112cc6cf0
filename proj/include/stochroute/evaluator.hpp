#pragma once

#include <string>
#include <vector>

#include "stochroute/formulation_min.hpp"
#include "stochroute/formulation_profit.hpp"
#include "stochroute/instance.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute {

enum class Formulation { min_cost, profit };

// RP / EV / EEV / VSS report. The vss field is oriented so that a
// nonnegative value signals stochastic-model advantage: EEV - RP for the
// minimization formulation, RP - EEV for the maximization one. Raw values
// are always present.
struct EvaluationReport {
  Formulation formulation = Formulation::min_cost;
  double rp = 0.0, ev = 0.0, eev = 0.0, vss = 0.0;
  double vss_over_rp_pct = 0.0, vss_over_eev_pct = 0.0;
  std::vector<double> per_scenario_beta;  // at the RP solution
  std::vector<double> vehicle_profit;     // profit formulation
  FirstStageSolution rp_solution, ev_solution;
  std::string rp_method;                  // extensive | lshaped | portfolio_dp
  bool rp_is_upper_bound = false;         // portfolio path: RP is best-candidate value
  bool partial = false;                   // a sub-solve hit a limit
  double wall_seconds = 0.0;
};

struct EvaluatorOptions {
  CostSource cost_source = CostSource::nominal_fuel;
  ProfitVariant variant = ProfitVariant::ts;
  int extensive_cap = 2000;        // |scenarios|*|arcs|*|vehicles| bound
  double time_limit_s = 3600.0;
  double eps = 1e-9;               // decomposition tolerance for RP
  int max_iterations = 500;
  // fuel paddings used to generate hedged first-stage candidates on the
  // dynamic-programming path (1.0 = nominal-optimal route)
  std::vector<double> candidate_paddings = {1.0, 1.15, 1.3, 1.5};
  int exact_dp_poi_limit = 14;     // exact candidate routes up to this size
};

// RP, EV, EEV and VSS per the two-stage semantics. The minimization
// formulation solves extensively within the size cap; above it,
// single-vehicle instances switch to the exact-evaluation candidate
// portfolio (RP flagged as an upper bound, EV chosen against the mean
// scenario from the same candidates, so VSS >= 0 holds structurally).
EvaluationReport evaluate_vss(const Instance& inst, const ScenarioSet& scenarios,
                              Formulation formulation, const EvaluatorOptions& opts = {});

struct SweepCase {
  double probability = 1.0;
  double objective = 0.0;
  std::vector<double> vehicle_profit;  // first-stage collected, per vehicle
};

// Solves the profit RP for each availability probability of the chosen
// vehicle (others fixed available), reporting the tie-resolved per-vehicle
// first-stage profits (see run_lshaped_lex_min_vehicle).
std::vector<SweepCase> availability_sweep(const Instance& inst,
                                          const std::vector<double>& probabilities,
                                          int vehicle, const EvaluatorOptions& opts = {});

struct OracleCaps {
  int max_pois = 6;
  int max_vehicles = 2;
  int max_scenarios = 4;
  int max_refuel = 4;
  long long max_candidates = 3'000'000;
};

struct OracleResult {
  double objective = 0.0;
  RouteSet routes;
  long long candidates = 0;
};

// Exhaustive two-stage optimum for small instances: enumerates POI-to-
// vehicle assignments, visit orders and refuel threadings (up to two sites
// per gap), evaluating the exact expected recourse of every candidate.
// Refuses inputs beyond the caps. The profit path requires nominal scenario
// fuels (availability uncertainty only).
OracleResult brute_force_optimum(const Instance& inst, const ScenarioSet& scenarios,
                                 Formulation formulation, const OracleCaps& caps = {},
                                 ProfitVariant variant = ProfitVariant::ts,
                                 CostSource cost_source = CostSource::nominal_fuel);

}  // namespace stochroute

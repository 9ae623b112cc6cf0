#include "stochroute/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <functional>
#include <limits>
#include <stdexcept>

#include "stochroute/generator.hpp"
#include "stochroute/lshaped.hpp"
#include "stochroute/route_dp.hpp"

namespace stochroute {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

Scenario mean_scenario(const Instance& inst, const ScenarioSet& scenarios) {
  Scenario sc;
  sc.probability = 1.0;
  sc.availability.assign(inst.num_vehicles(), 1);
  sc.fuel = scenarios.mean_fuel();
  return sc;
}

// most probable availability vector; ties toward more-available, then
// lexicographically available-first
Scenario modal_availability_scenario(const ScenarioSet& scenarios) {
  int best = 0;
  auto better = [&](const Scenario& a, const Scenario& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    int ca = 0, cb = 0;
    for (auto v : a.availability) ca += v;
    for (auto v : b.availability) cb += v;
    if (ca != cb) return ca > cb;
    return a.availability > b.availability;
  };
  for (int s = 1; s < scenarios.size(); ++s)
    if (better(scenarios[s], scenarios[best])) best = s;
  Scenario sc = scenarios[best];
  sc.probability = 1.0;
  sc.fuel = scenarios.mean_fuel();
  return sc;
}

// ---------------------------------------------------------------------------
// single-vehicle dynamic-programming path (minimization formulation)
// ---------------------------------------------------------------------------

std::vector<double> cost_matrix(const Instance& inst, int m, CostSource source) {
  if (source == CostSource::nominal_fuel) return inst.nominal_fuel_matrix(m);
  const int V = inst.num_vertices();
  std::vector<double> c(V * V, 0.0);
  for (int i = 0; i < V; ++i)
    for (int j = 0; j < V; ++j)
      if (i != j) c[inst.arc(i, j)] = inst.travel_cost(i, j);
  return c;
}

double route_price(const Instance& inst, const std::vector<int>& route,
                   const std::vector<double>& price) {
  double total = 0.0;
  for (size_t k = 0; k + 1 < route.size(); ++k)
    total += price[inst.arc(route[k], route[k + 1])];
  return total;
}

// nearest-neighbour order improved by 2-opt, refuel threading re-optimized
// per evaluation
RouteDp::Result heuristic_route(const Instance& inst, const RouteDp& dp,
                                const std::vector<double>& price) {
  const int n = inst.num_pois();
  std::vector<int> order;
  {
    std::vector<uint8_t> used(n, 0);
    int at = inst.home_depot();
    for (int step = 0; step < n; ++step) {
      int pick = -1;
      double best = kInf;
      for (int p = 0; p < n; ++p) {
        if (used[p]) continue;
        double c = price[inst.arc(at, inst.poi_vertex(p))];
        if (c < best - 1e-12) {
          best = c;
          pick = p;
        }
      }
      order.push_back(pick);
      used[pick] = 1;
      at = inst.poi_vertex(pick);
    }
  }
  auto eval = [&](const std::vector<int>& o) {
    auto r = dp.solve_fixed_order(o, false);
    return r.feasible ? r.cost : kInf;
  };
  double cur = eval(order);
  for (int pass = 0; pass < 30; ++pass) {
    bool improved = false;
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::vector<int> cand = order;
        std::reverse(cand.begin() + i, cand.begin() + j + 1);
        double c = eval(cand);
        if (c < cur - 1e-9) {
          order = std::move(cand);
          cur = c;
          improved = true;
        }
      }
    if (!improved) break;
  }
  return dp.solve_fixed_order(order, true);
}

struct DpCandidate {
  std::vector<int> route;
  std::vector<uint8_t> arcs;  // V*V
  double first_cost = 0.0;
};

// first-stage candidate: cheapest route under the given burn padding
bool make_candidate(const Instance& inst, const std::vector<double>& price,
                    const std::vector<double>& burn, int exact_limit, DpCandidate* out) {
  RouteDp dp(inst, 0, price, burn);
  uint64_t full = (1ULL << inst.num_pois()) - 1;
  RouteDp::Result r = inst.num_pois() <= exact_limit ? dp.solve(full, true)
                                                     : heuristic_route(inst, dp, price);
  if (!r.feasible) return false;
  out->route = r.route;
  out->arcs.assign(inst.num_vertices() * inst.num_vertices(), 0);
  for (size_t k = 0; k + 1 < r.route.size(); ++k)
    out->arcs[inst.arc(r.route[k], r.route[k + 1])] = 1;
  out->first_cost = route_price(inst, r.route, price);
  return true;
}

// exact recourse of a single-vehicle candidate under one scenario: rebuild
// the full visit at realized fuels, first-stage arcs free
double repair_beta(const Instance& inst, const std::vector<uint8_t>& arcs,
                   const std::vector<double>& scenario_fuel, bool* exact, bool* partial) {
  const int V = inst.num_vertices();
  std::vector<double> price(V * V, 0.0);
  for (int a = 0; a < V * V; ++a) price[a] = arcs[a] ? 0.0 : scenario_fuel[a];
  RouteDp dp(inst, 0, price, scenario_fuel);
  uint64_t full = (1ULL << inst.num_pois()) - 1;
  auto r = dp.solve_best_first(full);
  if (r.aborted) {
    if (inst.num_pois() <= 18) {
      r = dp.solve(full, false);
    } else {
      *exact = false;
      *partial = true;
      // bounded fallback: re-thread the first-stage visiting order
      RouteExtraction ex = extract_routes(inst, {arcs});
      std::vector<int> order;
      for (int v : ex.routes.routes[0])
        if (inst.is_poi(v)) order.push_back(inst.poi_ordinal(v));
      auto rb = dp.solve_fixed_order(order, false);
      return rb.feasible ? rb.cost : 0.0;
    }
  }
  if (!r.feasible)
    throw std::runtime_error("recourse repair infeasible; fuel data inconsistent");
  return r.cost;
}

FirstStageSolution route_to_first_stage(const Instance& inst, const DpCandidate& cand,
                                        double objective) {
  const int V = inst.num_vertices();
  FirstStageSolution fs;
  fs.objective = objective;
  fs.x.assign(1, cand.arcs);
  fs.z.assign(1, std::vector<double>(V * V, 0.0));
  double fuel = 0.0;
  for (size_t k = 0; k + 1 < cand.route.size(); ++k) {
    int u = cand.route[k], w = cand.route[k + 1];
    if (inst.is_depot(u)) fuel = 0.0;
    fuel += inst.nominal_fuel(u, w, 0);
    fs.z[0][inst.arc(u, w)] = fuel;
  }
  return fs;
}

EvaluationReport evaluate_min_portfolio(const Instance& inst, const ScenarioSet& scenarios,
                                        const EvaluatorOptions& opts) {
  if (inst.num_vehicles() != 1)
    throw std::invalid_argument(
        "instance exceeds the extensive-form cap and the candidate-portfolio path "
        "requires a single vehicle; shrink the scenario set or raise the cap");
  EvaluationReport rep;
  rep.formulation = Formulation::min_cost;
  rep.rp_method = "portfolio_dp";
  rep.rp_is_upper_bound = true;

  const auto price = cost_matrix(inst, 0, opts.cost_source);
  const auto nominal = inst.nominal_fuel_matrix(0);
  const auto mean = scenarios.mean_fuel()[0];

  std::vector<DpCandidate> candidates;
  auto add_candidate = [&](const std::vector<double>& burn) {
    DpCandidate c;
    if (!make_candidate(inst, price, burn, opts.exact_dp_poi_limit, &c)) return;
    for (const auto& seen : candidates)
      if (seen.arcs == c.arcs) return;
    candidates.push_back(std::move(c));
  };
  for (double pad : opts.candidate_paddings) {
    std::vector<double> burn(nominal);
    for (auto& f : burn) f *= pad;
    add_candidate(burn);
  }
  {
    // mean-scenario-aware candidate, kept nominal-feasible
    std::vector<double> burn(nominal.size());
    for (size_t a = 0; a < burn.size(); ++a) burn[a] = std::max(nominal[a], mean[a]);
    add_candidate(burn);
  }
  if (candidates.empty())
    throw std::runtime_error("no fuel-feasible route exists at nominal consumption");

  bool exact = true;
  double best_rp = kInf, best_ev = kInf;
  int rp_pick = -1, ev_pick = -1;
  std::vector<std::vector<double>> betas(candidates.size());
  for (size_t c = 0; c < candidates.size(); ++c) {
    double expected = 0.0;
    for (const auto& sc : scenarios.scenarios) {
      double b = repair_beta(inst, candidates[c].arcs, sc.fuel[0], &exact, &rep.partial);
      betas[c].push_back(b);
      expected += sc.probability * b;
    }
    double value = candidates[c].first_cost + expected;
    if (value < best_rp - 1e-12) {
      best_rp = value;
      rp_pick = static_cast<int>(c);
    }
    double ev_value = candidates[c].first_cost +
                      repair_beta(inst, candidates[c].arcs, mean, &exact, &rep.partial);
    if (ev_value < best_ev - 1e-12) {
      best_ev = ev_value;
      ev_pick = static_cast<int>(c);
    }
  }
  rep.rp = best_rp;
  rep.ev = best_ev;
  // EEV: the mean-scenario choice re-priced under the true scenario set
  double eev = candidates[ev_pick].first_cost;
  for (int s = 0; s < scenarios.size(); ++s)
    eev += scenarios[s].probability * betas[ev_pick][s];
  rep.eev = eev;
  rep.vss = rep.eev - rep.rp;
  rep.per_scenario_beta = betas[rp_pick];
  rep.rp_solution = route_to_first_stage(inst, candidates[rp_pick], best_rp);
  rep.ev_solution = route_to_first_stage(inst, candidates[ev_pick], best_ev);
  return rep;
}

EvaluationReport evaluate_min(const Instance& inst, const ScenarioSet& scenarios,
                              const EvaluatorOptions& opts) {
  int arcs = 0;
  for (int i = 0; i < inst.num_vertices(); ++i)
    for (int j = 0; j < inst.num_vertices(); ++j)
      if (inst.arc_exists(i, j)) ++arcs;
  long long load = 1LL * scenarios.size() * arcs * inst.num_vehicles();
  if (load > opts.extensive_cap) return evaluate_min_portfolio(inst, scenarios, opts);

  EvaluationReport rep;
  rep.formulation = Formulation::min_cost;
  rep.rp_method = "extensive";
  MipOptions mo;
  mo.time_limit_s = opts.time_limit_s;

  auto rp = solve_min_extensive(inst, scenarios, opts.cost_source, mo,
                                std::numeric_limits<int>::max());
  if (!rp.has_solution()) throw std::runtime_error("recourse problem solve failed");
  rep.partial |= rp.status != LpSolution::Status::optimal;
  rep.rp = rp.objective;
  rep.rp_solution = rp.first_stage;
  rep.per_scenario_beta = rp.per_scenario_beta;

  ScenarioSet mean_set;
  mean_set.scenarios.push_back(mean_scenario(inst, scenarios));
  auto ev = solve_min_extensive(inst, mean_set, opts.cost_source, mo,
                                std::numeric_limits<int>::max());
  if (!ev.has_solution()) throw std::runtime_error("mean-scenario solve failed");
  rep.partial |= ev.status != LpSolution::Status::optimal;
  rep.ev = ev.objective;
  rep.ev_solution = ev.first_stage;

  double eev = first_stage_cost(inst, ev.first_stage, opts.cost_source);
  for (const auto& sc : scenarios.scenarios) {
    auto rv = recourse_value_min(inst, ev.first_stage, sc, mo);
    if (rv.status != LpSolution::Status::optimal &&
        rv.status != LpSolution::Status::feasible)
      throw std::runtime_error("recourse evaluation failed");
    rep.partial |= rv.status != LpSolution::Status::optimal;
    eev += sc.probability * rv.value;
  }
  rep.eev = eev;
  rep.vss = rep.eev - rep.rp;
  return rep;
}

EvaluationReport evaluate_profit(const Instance& inst, const ScenarioSet& scenarios,
                                 const EvaluatorOptions& opts) {
  EvaluationReport rep;
  rep.formulation = Formulation::profit;
  rep.rp_method = "lshaped";

  LShapedOptions lo;
  lo.eps = opts.eps;
  lo.max_iterations = opts.max_iterations;
  lo.time_limit_s = opts.time_limit_s;

  auto rp = run_lshaped(inst, scenarios, opts.variant, lo);
  if (!rp.solve.has_solution()) throw std::runtime_error("recourse problem solve failed");
  rep.partial |= !rp.converged;
  rep.rp = rp.solve.objective;
  rep.rp_solution = rp.solve.first_stage;
  rep.per_scenario_beta = rp.solve.per_scenario_beta;
  rep.vehicle_profit = rp.solve.vehicle_profit;

  ScenarioSet modal;
  modal.scenarios.push_back(modal_availability_scenario(scenarios));
  auto ev = run_lshaped(inst, modal, opts.variant, lo);
  if (!ev.solve.has_solution()) throw std::runtime_error("mean-scenario solve failed");
  rep.partial |= !ev.converged;
  rep.ev = ev.solve.objective;
  rep.ev_solution = ev.solve.first_stage;

  double eev = first_stage_profit(inst, ev.solve.first_stage);
  for (const auto& sc : scenarios.scenarios)
    eev += sc.probability * recourse_value_profit(inst, ev.solve.first_stage, sc);
  rep.eev = eev;
  rep.vss = rep.rp - rep.eev;
  return rep;
}

}  // namespace

EvaluationReport evaluate_vss(const Instance& inst, const ScenarioSet& scenarios,
                              Formulation formulation, const EvaluatorOptions& opts) {
  auto t0 = clock_t_::now();
  {
    auto viol = validate_scenarios(inst, scenarios);
    if (!viol.empty())
      throw std::invalid_argument("invalid scenario set: " + viol.front().message);
  }
  EvaluationReport rep = formulation == Formulation::min_cost
                             ? evaluate_min(inst, scenarios, opts)
                             : evaluate_profit(inst, scenarios, opts);
  rep.vss_over_rp_pct = rep.rp != 0.0 ? 100.0 * rep.vss / std::fabs(rep.rp) : 0.0;
  rep.vss_over_eev_pct = rep.eev != 0.0 ? 100.0 * rep.vss / std::fabs(rep.eev) : 0.0;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

std::vector<SweepCase> availability_sweep(const Instance& inst,
                                          const std::vector<double>& probabilities,
                                          int vehicle, const EvaluatorOptions& opts) {
  if (!inst.has_profits())
    throw std::invalid_argument("availability sweep requires the profit formulation");
  if (vehicle < 0 || vehicle >= inst.num_vehicles())
    throw std::invalid_argument("unknown vehicle index");
  LShapedOptions lo;
  lo.eps = opts.eps;
  lo.max_iterations = opts.max_iterations;
  lo.time_limit_s = opts.time_limit_s;

  std::vector<SweepCase> out;
  for (double p : probabilities) {
    ScenarioConfig sconf;
    sconf.availability_probability.assign(inst.num_vehicles(), 1.0);
    sconf.availability_probability[vehicle] = p;
    ScenarioSet set = sample_availability_scenarios(inst, sconf);
    auto res = run_lshaped_lex_min_vehicle(inst, set, opts.variant, vehicle, lo);
    if (!res.solve.has_solution())
      throw std::runtime_error("sweep case failed to solve");
    SweepCase c;
    c.probability = p;
    c.objective = res.solve.objective;
    c.vehicle_profit = res.solve.vehicle_profit;
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// brute-force oracle
// ---------------------------------------------------------------------------

namespace {

struct VehicleCandidate {
  double cost = 0.0;
  std::vector<int> route;
};

// enumerate every visiting order and refuel threading (<= 2 sites per gap)
// of `mask`, nominal-fuel feasible; emits closed walks
void enumerate_routes(const Instance& inst, int m, uint32_t mask, CostSource source,
                      long long budget_cap, long long* budget,
                      std::vector<VehicleCandidate>* out) {
  const auto& burn = inst.nominal_fuel_matrix(m);
  std::vector<double> price = cost_matrix(inst, m, source);
  const double cap = inst.fuel_capacity(m);
  const int d0 = inst.home_depot();

  struct Frame {
    int at;
    double fuel, cost;
    uint32_t remaining;
  };
  std::vector<int> walk{d0};

  std::function<void(int, double, double, uint32_t)> rec = [&](int at, double fuel,
                                                               double cost,
                                                               uint32_t remaining) {
    if (++*budget > budget_cap)
      throw std::invalid_argument("oracle candidate budget exceeded; shrink the instance");
    auto try_leg = [&](int target, uint32_t next_remaining, auto&& continuation) {
      // direct or via one/two refuel sites
      auto step = [&](const std::vector<int>& stops) {
        double f = fuel, c = cost;
        int prev = at;
        size_t base = walk.size();
        bool ok = true;
        std::vector<int> path = stops;
        path.push_back(target);
        for (int v : path) {
          if (v == prev || !inst.arc_exists(prev, v)) {
            ok = false;
            break;
          }
          f += burn[inst.arc(prev, v)];
          c += price[inst.arc(prev, v)];
          if (f > cap + 1e-9) {
            ok = false;
            break;
          }
          if (inst.is_depot(v)) f = 0.0;
          walk.push_back(v);
          prev = v;
        }
        if (ok) continuation(target, f, c, next_remaining);
        walk.resize(base);
      };
      step({});
      for (int d = 1; d < inst.num_depots(); ++d) {
        step({d});
        for (int d2 = 1; d2 < inst.num_depots(); ++d2)
          if (d2 != d) step({d, d2});
      }
    };
    if (remaining == 0) {
      try_leg(d0, 0, [&](int, double, double c, uint32_t) {
        out->push_back({c, walk});
      });
      return;
    }
    for (int p = 0; p < inst.num_pois(); ++p) {
      if (!(remaining & (1u << p))) continue;
      try_leg(inst.poi_vertex(p), remaining & ~(1u << p),
              [&](int, double f2, double c2, uint32_t rem2) {
                rec(inst.poi_vertex(p), f2, c2, rem2);
              });
    }
  };

  if (mask == 0) {
    // bounce routes through one or two refuel sites
    for (int d = 1; d < inst.num_depots(); ++d) {
      double f1 = burn[inst.arc(d0, d)];
      if (!inst.arc_exists(d0, d) || f1 > cap + 1e-9) continue;
      if (inst.arc_exists(d, d0) && burn[inst.arc(d, d0)] <= cap + 1e-9)
        out->push_back({price[inst.arc(d0, d)] + price[inst.arc(d, d0)],
                        {d0, d, d0}});
    }
    std::sort(out->begin(), out->end(),
              [](const VehicleCandidate& a, const VehicleCandidate& b) {
                return a.cost != b.cost ? a.cost < b.cost : a.route < b.route;
              });
    return;
  }
  rec(d0, 0.0, 0.0, mask);
  std::sort(out->begin(), out->end(),
            [](const VehicleCandidate& a, const VehicleCandidate& b) {
              return a.cost != b.cost ? a.cost < b.cost : a.route < b.route;
            });
}

std::vector<uint8_t> route_arcs(const Instance& inst, const std::vector<int>& route) {
  std::vector<uint8_t> arcs(inst.num_vertices() * inst.num_vertices(), 0);
  for (size_t k = 0; k + 1 < route.size(); ++k) arcs[inst.arc(route[k], route[k + 1])] = 1;
  return arcs;
}

OracleResult oracle_min(const Instance& inst, const ScenarioSet& scenarios,
                        const OracleCaps& caps, CostSource source) {
  const int n = inst.num_pois();
  const int M = inst.num_vehicles();
  const uint32_t full = n == 0 ? 0 : (1u << n) - 1;
  OracleResult out;
  if (n == 0) {  // no mission: idle fleet, zero objective
    out.routes.routes.assign(M, {});
    return out;
  }

  long long budget = 0;
  // per-vehicle candidates per mask
  std::vector<std::map<uint32_t, std::vector<VehicleCandidate>>> cand(M);
  for (int m = 0; m < M; ++m) {
    for (uint32_t mask = 0; mask <= full; ++mask) {
      if (M == 1 && mask != full) continue;  // single vehicle must take all
      std::vector<VehicleCandidate> list;
      enumerate_routes(inst, m, mask, source, caps.max_candidates, &budget, &list);
      cand[m][mask] = std::move(list);
    }
  }

  // repair DP per (vehicle, scenario, candidate arcs): mask-indexed costs
  auto repair_costs = [&](int m, const std::vector<uint8_t>& arcs, const Scenario& sc) {
    const int V = inst.num_vertices();
    std::vector<double> price(V * V, 0.0);
    for (int a = 0; a < V * V; ++a) price[a] = arcs[a] ? 0.0 : sc.fuel[m][a];
    RouteDp dp(inst, m, price, sc.fuel[m]);
    return dp.all_mask_costs();
  };

  double best = kInf;
  std::vector<std::vector<int>> best_routes(M);

  auto evaluate_pair = [&](const VehicleCandidate& c0, const VehicleCandidate* c1) {
    double first = c0.cost + (c1 ? c1->cost : 0.0);
    if (first >= best - 1e-12) return;
    double expected = 0.0;
    for (const auto& sc : scenarios.scenarios) {
      auto r0 = repair_costs(0, route_arcs(inst, c0.route), sc);
      double beta;
      if (!c1) {
        beta = r0[full];
      } else {
        auto r1 = repair_costs(1, route_arcs(inst, c1->route), sc);
        beta = kInf;
        for (uint32_t q = full;; q = (q - 1) & full) {
          beta = std::min(beta, r0[q] + r1[full & ~q]);
          if (q == 0) break;
        }
      }
      expected += sc.probability * beta;
    }
    double value = first + expected;
    if (value < best - 1e-12) {
      best = value;
      best_routes[0] = c0.route;
      if (c1) best_routes[1] = c1->route;
    }
  };

  ++out.candidates;
  if (M == 1) {
    for (const auto& c : cand[0][full]) {
      ++out.candidates;
      if (c.cost >= best) break;  // sorted by cost; recourse is nonnegative
      evaluate_pair(c, nullptr);
    }
  } else {
    for (uint32_t s0 = 0; s0 <= full; ++s0) {
      uint32_t s1 = full & ~s0;
      const auto& l0 = cand[0][s0];
      const auto& l1 = cand[1][s1];
      if (l0.empty() || l1.empty()) continue;
      for (const auto& c0 : l0) {
        if (c0.cost + l1.front().cost >= best) break;
        for (const auto& c1 : l1) {
          ++out.candidates;
          if (c0.cost + c1.cost >= best) break;
          evaluate_pair(c0, &c1);
        }
      }
    }
  }
  if (best >= kInf) throw std::runtime_error("oracle found no feasible fleet plan");
  out.objective = best;
  out.routes.routes = best_routes;
  return out;
}

OracleResult oracle_profit(const Instance& inst, const ScenarioSet& scenarios,
                           const OracleCaps& caps, ProfitVariant variant) {
  (void)caps;
  const int n = inst.num_pois();
  const int M = inst.num_vehicles();
  OracleResult out;
  out.routes.routes.assign(M, {});
  if (n == 0) return out;
  {
    std::vector<std::vector<double>> nominal;
    for (int m = 0; m < M; ++m) nominal.push_back(inst.nominal_fuel_matrix(m));
    if (!scenarios.fuel_equals(nominal, 1e-9))
      throw std::invalid_argument(
          "profit oracle supports availability uncertainty only (nominal scenario fuels)");
  }
  const uint32_t full = (1u << n) - 1;

  // expected availability and per-(vehicle, mask) achievability
  std::vector<double> ealpha(M, 0.0);
  for (const auto& sc : scenarios.scenarios)
    for (int m = 0; m < M; ++m) ealpha[m] += sc.probability * sc.availability[m];
  std::vector<std::vector<double>> fuel_cost(M);
  for (int m = 0; m < M; ++m) {
    RouteDp dp(inst, m, inst.nominal_fuel_matrix(m), inst.nominal_fuel_matrix(m));
    fuel_cost[m] = dp.all_mask_costs();
  }
  auto feasible = [&](int m, uint32_t mask) {
    if (mask == 0) return true;  // idle vehicles bounce off a refuel site
    double c = fuel_cost[m][mask];
    if (!(c < kInf)) return false;
    return variant == ProfitVariant::ts || c <= inst.fuel_capacity(m) + 1e-9;
  };
  auto mask_profit = [&](int m, uint32_t mask) {
    double t = 0.0;
    for (int p = 0; p < n; ++p)
      if (mask & (1u << p)) t += inst.profit(inst.poi_vertex(p), m);
    return t;
  };

  double best = -kInf;
  std::vector<uint32_t> pick(M, 0);
  if (M == 1) {
    for (uint32_t s = 0; s <= full; ++s) {
      ++out.candidates;
      if (!feasible(0, s)) continue;
      double v = ealpha[0] * mask_profit(0, s);
      if (v > best + 1e-12) {
        best = v;
        pick = {s};
      }
    }
  } else {
    for (uint32_t s0 = 0; s0 <= full; ++s0) {
      if (!feasible(0, s0)) continue;
      double v0 = ealpha[0] * mask_profit(0, s0);
      uint32_t rest = full & ~s0;
      for (uint32_t s1 = rest;; s1 = (s1 - 1) & rest) {
        ++out.candidates;
        if (feasible(1, s1)) {
          double v = v0 + ealpha[1] * mask_profit(1, s1);
          if (v > best + 1e-12) {
            best = v;
            pick = {s0, s1};
          }
        }
        if (s1 == 0) break;
      }
    }
  }
  if (best <= -kInf) throw std::runtime_error("oracle found no feasible assignment");
  out.objective = best;
  for (int m = 0; m < M; ++m) {
    RouteDp dp(inst, m, inst.nominal_fuel_matrix(m), inst.nominal_fuel_matrix(m));
    auto r = dp.solve(pick[m], true);
    if (r.feasible) out.routes.routes[m] = r.route;
  }
  return out;
}

}  // namespace

OracleResult brute_force_optimum(const Instance& inst, const ScenarioSet& scenarios,
                                 Formulation formulation, const OracleCaps& caps,
                                 ProfitVariant variant, CostSource cost_source) {
  if (inst.num_pois() > caps.max_pois)
    throw std::invalid_argument("oracle cap: at most " + std::to_string(caps.max_pois) +
                                " POIs (got " + std::to_string(inst.num_pois()) + ")");
  if (inst.num_vehicles() > caps.max_vehicles)
    throw std::invalid_argument("oracle cap: at most " + std::to_string(caps.max_vehicles) +
                                " vehicles (got " + std::to_string(inst.num_vehicles()) + ")");
  if (scenarios.size() > caps.max_scenarios)
    throw std::invalid_argument("oracle cap: at most " + std::to_string(caps.max_scenarios) +
                                " scenarios (got " + std::to_string(scenarios.size()) + ")");
  if (inst.num_refuel_depots() > caps.max_refuel)
    throw std::invalid_argument("oracle cap: at most " + std::to_string(caps.max_refuel) +
                                " refuel sites (got " +
                                std::to_string(inst.num_refuel_depots()) + ")");
  return formulation == Formulation::min_cost
             ? oracle_min(inst, scenarios, caps, cost_source)
             : oracle_profit(inst, scenarios, caps, variant);
}

}  // namespace stochroute

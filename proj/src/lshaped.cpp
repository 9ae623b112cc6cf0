#include "stochroute/lshaped.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "stochroute/subtour.hpp"

namespace stochroute {

namespace {

std::vector<std::vector<double>> to_fractional(const std::vector<std::vector<uint8_t>>& x) {
  std::vector<std::vector<double>> out(x.size());
  for (size_t m = 0; m < x.size(); ++m) out[m].assign(x[m].begin(), x[m].end());
  return out;
}

LazyHook subtour_hook(const Instance& inst, std::vector<std::vector<int>> x_idx,
                      std::vector<LinearProgram::Row>* sink) {
  return [inst, x_idx, sink](const std::vector<double>& point) {
    const int V = inst.num_vertices();
    std::vector<std::vector<uint8_t>> x(x_idx.size(), std::vector<uint8_t>(V * V, 0));
    for (size_t m = 0; m < x_idx.size(); ++m)
      for (int a = 0; a < V * V; ++a)
        if (x_idx[m][a] >= 0 && point[x_idx[m][a]] > 0.5) x[m][a] = 1;
    std::vector<LinearProgram::Row> rows;
    for (const auto& viol : separate_subtours(inst, x))
      rows.push_back(subtour_row(inst, viol, x_idx));
    if (sink)
      for (const auto& r : rows) sink->push_back(r);
    return rows;
  };
}

double expected_recourse(const Instance& inst, const ScenarioSet& scenarios,
                         const FirstStageSolution& fs, std::vector<double>* per_scenario,
                         std::vector<ProfitRecourse>* recs, std::vector<LpSolution>* sols) {
  double total = 0.0;
  if (per_scenario) per_scenario->clear();
  for (const auto& sc : scenarios.scenarios) {
    ProfitRecourse rec = build_recourse_profit(inst, fs, sc);
    LpSolution sol = solve_lp(rec.lp);
    if (sol.status != LpSolution::Status::optimal)
      throw std::runtime_error("scenario recourse LP not optimal; "
                               "this signals a solver bug or inconsistent scenario data");
    total += sc.probability * sol.objective;
    if (per_scenario) per_scenario->push_back(sol.objective);
    if (recs) recs->push_back(std::move(rec));
    if (sols) sols->push_back(std::move(sol));
  }
  return total;
}

}  // namespace

OptimalityCut make_single_cut(const Instance& inst, const ScenarioSet& scenarios,
                              const std::vector<ProfitRecourse>& recourses,
                              const std::vector<LpSolution>& duals,
                              const ProfitFirstStage& master, int theta_var,
                              int iteration,
                              const std::vector<std::vector<double>>& at_x, bool audit) {
  const int nvars = master.lp.num_vars();
  std::vector<double> coef(nvars, 0.0);
  double rhs_const = 0.0;
  double beta_sum = 0.0;

  for (int s = 0; s < scenarios.size(); ++s) {
    const Scenario& sc = scenarios[s];
    const ProfitRecourse& rec = recourses[s];
    const LpSolution& sol = duals[s];
    if (sol.status != LpSolution::Status::optimal)
      throw std::runtime_error("make_single_cut requires optimal scenario duals");
    const double p = sc.probability;
    beta_sum += p * sol.objective;

    // The flow-balance rhs equals (1-alpha)*sum_j f_ij*x_ij on the master
    // polytope (its own flow equalities), so the cut needs no flow-variable
    // coefficients at all; this keeps master LP bounds sharp.
    for (const auto& fr : rec.flow_rows) {
      double y = sol.duals[fr.row];
      if (y == 0.0) continue;
      int t = fr.poi, m = fr.m;
      double one_minus_alpha = 1.0 - sc.availability[m];
      if (one_minus_alpha == 0.0) continue;
      for (int j = 0; j < inst.num_vertices(); ++j) {
        if (j == t) continue;
        int xi = master.x_idx[m][inst.arc(t, j)];
        if (xi >= 0) coef[xi] += p * y * one_minus_alpha * inst.nominal_fuel(t, j, m);
      }
    }
    for (const auto& lr : rec.link_rows) {
      double y = sol.duals[lr.row];
      if (y == 0.0) continue;
      int xi = master.x_idx[lr.m][inst.arc(lr.from, lr.to)];
      if (xi >= 0) coef[xi] += p * y;
    }
    for (const auto& dr : rec.depot_rows) {
      double y = sol.duals[dr.row];
      if (y == 0.0) continue;
      double alpha = sc.availability[dr.m];
      int xi = master.x_idx[dr.m][inst.arc(dr.d, dr.i)];
      if (xi >= 0) coef[xi] += p * y * (1.0 - alpha) * inst.nominal_fuel(dr.d, dr.i, dr.m);
    }
    // v-variable bound duals fold into the constant
    double bound_part = 0.0;
    for (size_t j = 0; j < sol.x.size(); ++j)
      if (std::fabs(sol.reduced_costs[j]) > 1e-12) bound_part += sol.reduced_costs[j] * sol.x[j];
    rhs_const += p * bound_part;
  }

  if (audit) {
    // the aggregated affine function must reproduce sum(p * beta) at the
    // generating point (strong duality per scenario)
    double q = rhs_const;
    for (int m = 0; m < inst.num_vehicles(); ++m)
      for (int i = 0; i < inst.num_vertices(); ++i)
        for (int j = 0; j < inst.num_vertices(); ++j) {
          if (i == j) continue;
          int a = inst.arc(i, j);
          int xi = master.x_idx[m][a];
          if (xi >= 0) q += coef[xi] * at_x[m][a];
        }
    if (std::fabs(q - beta_sum) > 1e-5 * std::max(1.0, std::fabs(beta_sum)))
      throw std::logic_error("optimality cut fails its generating-point audit: " +
                             std::to_string(q) + " vs " + std::to_string(beta_sum));
  }

  OptimalityCut cut;
  cut.iteration = iteration;
  cut.row.sense = LinearProgram::RowSense::le;
  cut.row.rhs = rhs_const;
  cut.row.name = "optcut_" + std::to_string(iteration);
  cut.row.coef.emplace_back(theta_var, 1.0);
  for (int j = 0; j < nvars; ++j)
    if (coef[j] != 0.0) cut.row.coef.emplace_back(j, -coef[j]);
  return cut;
}

namespace {

struct MasterContext {
  ProfitFirstStage model;
  int theta = -1;
  std::vector<LinearProgram::Row> subtour_rows;  // persistent across iterations
};

FirstStageSolution decode_master(const Instance& inst, const MasterContext& ctx,
                                 const LpSolution& sol) {
  return decode_first_stage(inst, ctx.model.x_idx, ctx.model.z_idx, sol.x, sol.objective);
}

}  // namespace

LShapedResult run_lshaped(const Instance& inst, const ScenarioSet& scenarios,
                          ProfitVariant variant, const LShapedOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto now_s = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  {
    auto viol = validate_scenarios(inst, ScenarioSet{scenarios});
    if (!viol.empty())
      throw std::invalid_argument("invalid scenario set: " + viol.front().message);
  }

  LShapedResult out;
  MasterContext ctx;
  ctx.model = build_first_stage_profit(inst, variant);

  // Step 0: initial first stage solved without theta
  FirstStageSolution current;
  {
    auto hook = subtour_hook(inst, ctx.model.x_idx, &ctx.subtour_rows);
    MipOptions mo = opts.master;
    mo.time_limit_s = std::min(mo.time_limit_s, opts.time_limit_s);
    auto sol = solve_mip(ctx.model.lp, hook, mo);
    if (sol.status != LpSolution::Status::optimal) {
      out.stop_reason = "initial master not solved to optimality";
      out.solve.status = sol.status;
      return out;
    }
    current = decode_master(inst, ctx, sol);
    for (const auto& r : ctx.subtour_rows) ctx.model.lp.add_row(r);
    ctx.subtour_rows.clear();
  }
  // theta: expected recourse stand-in. The recourse objective is a sum of
  // nonpositive terms, so 0 is a valid initial cap (tighter than the total
  // collectible profit and it keeps master LP bounds sharp); the lower
  // bound covers the worst case of losing every collected profit.
  ctx.theta = ctx.model.lp.add_var(-ctx.model.max_total_profit - 1.0, 0.0, 1.0, false,
                                   "theta");

  double theta_at_master = 0.0;  // value implied before any cut
  FirstStageSolution incumbent;
  std::vector<double> incumbent_beta;
  bool have_incumbent = false;
  std::vector<double> last_master_point;
  std::set<std::vector<uint8_t>> visited;  // flattened x patterns

  const auto usable_value = [&](int m, int a) {
    return ctx.model.x_idx[m][a] >= 0;
  };

  for (int n = 1; n <= opts.max_iterations; ++n) {
    // Step 1: scenario recourse LPs at the current point
    std::vector<ProfitRecourse> recs;
    std::vector<LpSolution> sols;
    std::vector<double> betas;
    double expected = expected_recourse(inst, scenarios, current, &betas, &recs, &sols);

    // Step 5 at the current point: true value and incumbent update
    double value = first_stage_profit(inst, current) + expected;
    if (value > out.lb + 1e-12 || !have_incumbent) {
      out.lb = std::max(out.lb, value);
      incumbent = current;
      incumbent_beta = betas;
      have_incumbent = true;
    }
    double cut_violation = theta_at_master - expected;
    out.trace.push_back({n, out.lb, out.ub, cut_violation, now_s()});

    // Step 6 verbatim, plus an absolute guard for zero objectives
    if (out.ub - out.lb < opts.eps * std::fabs(out.ub) || out.ub - out.lb <= 1e-9) {
      out.converged = true;
      out.stop_reason = "gap closed";
      break;
    }
    if (now_s() > opts.time_limit_s) {
      out.stop_reason = "time limit";
      break;
    }

    // Step 2: one aggregated cut. Duals are priced at an interior core
    // point so the cut supports the recourse function across profit-
    // equivalent routings; on a revisited master point the cut is priced
    // there instead, which cuts it off and keeps convergence finite.
    std::vector<uint8_t> pattern;
    for (const auto& row : current.x) pattern.insert(pattern.end(), row.begin(), row.end());
    bool revisit = !visited.insert(pattern).second;
    OptimalityCut cut;
    if (revisit) {
      cut = make_single_cut(inst, scenarios, recs, sols, ctx.model, ctx.theta, n,
                            to_fractional(current.x), opts.audit_cuts);
    } else {
      std::vector<std::vector<double>> core(current.x.size());
      for (size_t m = 0; m < core.size(); ++m) {
        core[m].assign(current.x[m].size(), 0.0);
        for (size_t a = 0; a < core[m].size(); ++a)
          if (usable_value(static_cast<int>(m), static_cast<int>(a)))
            core[m][a] = 0.5 * current.x[m][a] + 0.25;
      }
      std::vector<ProfitRecourse> core_recs;
      std::vector<LpSolution> core_sols;
      for (const auto& sc : scenarios.scenarios) {
        core_recs.push_back(build_recourse_profit_at(inst, core, sc));
        core_sols.push_back(solve_lp(core_recs.back().lp));
        if (core_sols.back().status != LpSolution::Status::optimal)
          throw std::runtime_error("core-point recourse LP not optimal");
      }
      cut = make_single_cut(inst, scenarios, core_recs, core_sols, ctx.model, ctx.theta, n,
                            core, opts.audit_cuts);
    }
    ctx.model.lp.add_row(cut.row);
    out.cuts.push_back(std::move(cut));

    // Steps 3-4: master MIP with subtour separation to a fixed point
    auto hook = subtour_hook(inst, ctx.model.x_idx, &ctx.subtour_rows);
    MipOptions mo = opts.master;
    mo.time_limit_s = std::min(mo.time_limit_s, std::max(1.0, opts.time_limit_s - now_s()));
    if (!last_master_point.empty()) {
      // previous master point stays feasible; theta drops to its cut ceiling
      mo.warm_start = last_master_point;
      double ceil = 0.0;
      for (const auto& cut : out.cuts) {
        double linear = 0.0;
        for (const auto& [j, c] : cut.row.coef)
          if (j != ctx.theta) linear += c * mo.warm_start[j];
        ceil = std::min(ceil, cut.row.rhs - linear);
      }
      mo.warm_start.resize(ctx.model.lp.num_vars(), 0.0);
      mo.warm_start[ctx.theta] = std::max(ceil, -ctx.model.max_total_profit - 1.0);
    }
    auto sol = solve_mip(ctx.model.lp, hook, mo);
    for (const auto& r : ctx.subtour_rows) ctx.model.lp.add_row(r);
    ctx.subtour_rows.clear();
    if (sol.status != LpSolution::Status::optimal) {
      out.stop_reason = sol.hit_time_limit ? "time limit in master" : "master solve failed";
      break;
    }
    out.ub = std::min(out.ub, sol.objective);
    current = decode_master(inst, ctx, sol);
    theta_at_master = sol.x[ctx.theta];
    last_master_point = sol.x;

    if (n == opts.max_iterations) out.stop_reason = "iteration cap";
  }
  if (out.stop_reason.empty()) out.stop_reason = "iteration cap";

  // assemble the result from the incumbent (its value is exact)
  out.solve.status = have_incumbent
                         ? (out.converged ? LpSolution::Status::optimal
                                          : LpSolution::Status::feasible)
                         : LpSolution::Status::infeasible;
  if (have_incumbent) {
    out.solve.objective = out.lb;
    incumbent.objective = out.lb;
    out.solve.first_stage = incumbent;
    out.solve.per_scenario_beta = incumbent_beta;
    out.solve.vehicle_profit = per_vehicle_profit(inst, incumbent);
    auto extraction = extract_routes(inst, incumbent.x);
    if (extraction.ok) out.solve.routes = std::move(extraction.routes);
    out.solve.gap = out.ub - out.lb;
    out.solve.iterations = static_cast<int>(out.trace.size());
  }
  return out;
}

LShapedResult run_lshaped_lex_min_vehicle(const Instance& inst, const ScenarioSet& scenarios,
                                          ProfitVariant variant, int vehicle,
                                          const LShapedOptions& opts) {
  LShapedResult base = run_lshaped(inst, scenarios, variant, opts);
  if (!base.converged) return base;
  const double vstar = base.solve.objective;
  const double tol = 1e-6 * std::max(1.0, std::fabs(vstar));

  // fresh master carrying every cut learned so far; the swept vehicle's
  // profit coefficients are scaled by (1 - delta), which breaks ties toward
  // dropping that vehicle without distorting real trade-offs (profits are
  // integral, delta * total profit stays far below the value granularity)
  const double delta = 1e-4;
  MasterContext ctx;
  ctx.model = build_first_stage_profit(inst, variant);
  ctx.theta = ctx.model.lp.add_var(-ctx.model.max_total_profit - 1.0, 0.0, 1.0, false,
                                   "theta");
  for (const auto& cut : base.cuts) ctx.model.lp.add_row(cut.row);
  for (int i = 0; i < inst.num_vertices(); ++i)
    for (int j = 0; j < inst.num_vertices(); ++j) {
      if (i == j || !inst.is_poi(j)) continue;
      int xi = ctx.model.x_idx[vehicle][inst.arc(i, j)];
      if (xi >= 0) ctx.model.lp.vars[xi].obj = (1.0 - delta) * inst.profit(j, vehicle);
    }

  for (int round = 0; round < 50; ++round) {
    auto hook = subtour_hook(inst, ctx.model.x_idx, &ctx.subtour_rows);
    auto sol = solve_mip(ctx.model.lp, hook, opts.master);
    for (const auto& r : ctx.subtour_rows) ctx.model.lp.add_row(r);
    ctx.subtour_rows.clear();
    if (sol.status != LpSolution::Status::optimal) break;

    FirstStageSolution fs = decode_master(inst, ctx, sol);
    std::vector<ProfitRecourse> recs;
    std::vector<LpSolution> duals;
    std::vector<double> betas;
    double expected = expected_recourse(inst, scenarios, fs, &betas, &recs, &duals);
    double value = first_stage_profit(inst, fs) + expected;
    if (value >= vstar - 2.0 * tol) {  // verified optimal under the tie-break
      fs.objective = value;
      base.solve.first_stage = fs;
      base.solve.objective = value;
      base.solve.per_scenario_beta = betas;
      base.solve.vehicle_profit = per_vehicle_profit(inst, fs);
      auto extraction = extract_routes(inst, fs.x);
      if (extraction.ok) base.solve.routes = std::move(extraction.routes);
      return base;
    }
    // the theta estimate was loose at this point: tighten and retry
    auto cut = make_single_cut(inst, scenarios, recs, duals, ctx.model, ctx.theta,
                               1000 + round, to_fractional(fs.x), opts.audit_cuts);
    ctx.model.lp.add_row(cut.row);
    base.cuts.push_back(std::move(cut));
  }
  return base;  // tie-break could not be verified; base solution stands
}

std::string bounds_trace_csv(const std::vector<BoundsTraceEntry>& trace) {
  std::ostringstream os;
  os << "iteration,lb,ub,gap,seconds\n";
  char buf[160];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.3f\n", e.iteration, e.lb, e.ub,
                  e.ub - e.lb, e.seconds);
    os << buf;
  }
  return os.str();
}

}  // namespace stochroute

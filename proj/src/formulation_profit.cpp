#include "stochroute/formulation_profit.hpp"

#include <cmath>
#include <stdexcept>

#include "stochroute/subtour.hpp"

namespace stochroute {

namespace {

// arcs a vehicle can use at all: present and single-hop fuel within capacity
std::vector<std::vector<uint8_t>> usable_arcs(const Instance& inst) {
  const int V = inst.num_vertices();
  std::vector<std::vector<uint8_t>> u(inst.num_vehicles(), std::vector<uint8_t>(V * V, 0));
  for (int m = 0; m < inst.num_vehicles(); ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j)
        if (inst.arc_exists(i, j) && inst.nominal_fuel(i, j, m) <= inst.fuel_capacity(m))
          u[m][inst.arc(i, j)] = 1;
  return u;
}

std::string arc_name(const Instance& inst, const char* prefix, int i, int j, int m) {
  return std::string(prefix) + "_" + inst.vehicle_id(m) + "_" + inst.vertex_id(i) + "_" +
         inst.vertex_id(j);
}

}  // namespace

ProfitFirstStage build_first_stage_profit(const Instance& inst, ProfitVariant variant) {
  if (!inst.has_profits())
    throw std::invalid_argument("profit formulation requires POI profits");
  {
    auto viol = validate_instance(inst);
    if (!viol.empty())
      throw std::invalid_argument("invalid instance: " + viol.front().message +
                                  " (" + viol.front().field + " " + viol.front().entity + ")");
  }

  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  const int d0 = inst.home_depot();
  auto usable = usable_arcs(inst);

  ProfitFirstStage model;
  LinearProgram& lp = model.lp;
  lp.sense = LinearProgram::Sense::maximize;
  model.x_idx.assign(M, std::vector<int>(V * V, -1));
  model.z_idx.assign(M, std::vector<int>(V * V, -1));

  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        if (i == j || !usable[m][inst.arc(i, j)]) continue;
        double obj = inst.is_poi(j) ? inst.profit(j, m) : 0.0;
        model.x_idx[m][inst.arc(i, j)] =
            lp.add_var(0.0, 1.0, obj, true, arc_name(inst, "x", i, j, m));
      }
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i) {
      if (!inst.is_poi(i)) continue;  // depot-outgoing flow is substituted out
      for (int j = 0; j < V; ++j) {
        if (i == j || !usable[m][inst.arc(i, j)]) continue;
        model.z_idx[m][inst.arc(i, j)] =
            lp.add_var(0.0, inst.fuel_capacity(m), 0.0, false, arc_name(inst, "z", i, j, m));
      }
    }

  auto x_of = [&](int m, int i, int j) { return model.x_idx[m][inst.arc(i, j)]; };
  auto z_of = [&](int m, int i, int j) { return model.z_idx[m][inst.arc(i, j)]; };

  // refueling sites keep balanced degree per vehicle
  for (int m = 0; m < M; ++m)
    for (int d = 1; d < inst.num_depots(); ++d) {
      LinearProgram::Row row;
      for (int j = 0; j < V; ++j) {
        if (x_of(m, d, j) >= 0) row.coef.emplace_back(x_of(m, d, j), 1.0);
        if (x_of(m, j, d) >= 0) row.coef.emplace_back(x_of(m, j, d), -1.0);
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = 0.0;
      row.name = "bal_" + inst.vehicle_id(m) + "_" + inst.vertex_id(d);
      lp.add_row(row);
    }
  // every vehicle leaves and returns to the home depot exactly once
  for (int m = 0; m < M; ++m) {
    LinearProgram::Row out_row, in_row;
    for (int j = 0; j < V; ++j) {
      if (x_of(m, d0, j) >= 0) out_row.coef.emplace_back(x_of(m, d0, j), 1.0);
      if (x_of(m, j, d0) >= 0) in_row.coef.emplace_back(x_of(m, j, d0), 1.0);
    }
    out_row.sense = in_row.sense = LinearProgram::RowSense::eq;
    out_row.rhs = in_row.rhs = 1.0;
    out_row.name = "depart_" + inst.vehicle_id(m);
    in_row.name = "return_" + inst.vehicle_id(m);
    lp.add_row(out_row);
    lp.add_row(in_row);
  }
  // each POI visited at most once (across vehicles), in and out
  for (int p = 0; p < inst.num_pois(); ++p) {
    int t = inst.poi_vertex(p);
    LinearProgram::Row in_row, out_row;
    for (int m = 0; m < M; ++m)
      for (int j = 0; j < V; ++j) {
        if (x_of(m, j, t) >= 0) in_row.coef.emplace_back(x_of(m, j, t), 1.0);
        if (x_of(m, t, j) >= 0) out_row.coef.emplace_back(x_of(m, t, j), 1.0);
      }
    in_row.sense = out_row.sense = LinearProgram::RowSense::le;
    in_row.rhs = out_row.rhs = 1.0;
    in_row.name = "visit_in_" + inst.vertex_id(t);
    out_row.name = "visit_out_" + inst.vertex_id(t);
    lp.add_row(in_row);
    lp.add_row(out_row);
  }
  // per-vehicle degree balance at POIs
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < inst.num_pois(); ++p) {
      int t = inst.poi_vertex(p);
      LinearProgram::Row row;
      for (int j = 0; j < V; ++j) {
        if (x_of(m, t, j) >= 0) row.coef.emplace_back(x_of(m, t, j), 1.0);
        if (x_of(m, j, t) >= 0) row.coef.emplace_back(x_of(m, j, t), -1.0);
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = 0.0;
      row.name = "poi_bal_" + inst.vehicle_id(m) + "_" + inst.vertex_id(t);
      lp.add_row(row);
    }
  // fuel-flow balance at POIs (depot-outgoing z already substituted)
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < inst.num_pois(); ++p) {
      int t = inst.poi_vertex(p);
      LinearProgram::Row row;
      for (int j = 0; j < V; ++j) {
        if (z_of(m, t, j) >= 0) row.coef.emplace_back(z_of(m, t, j), 1.0);
        if (j != t && inst.is_poi(j) && z_of(m, j, t) >= 0)
          row.coef.emplace_back(z_of(m, j, t), -1.0);
        if (j != t && inst.is_depot(j) && x_of(m, j, t) >= 0)
          row.coef.emplace_back(x_of(m, j, t), -inst.nominal_fuel(j, t, m));
        if (x_of(m, t, j) >= 0)
          row.coef.emplace_back(x_of(m, t, j), -inst.nominal_fuel(t, j, m));
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = 0.0;
      row.name = "flow_" + inst.vehicle_id(m) + "_" + inst.vertex_id(t);
      lp.add_row(row);
    }
  // capacity coupling on remaining flow variables
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        int zi = z_of(m, i, j);
        if (zi < 0) continue;
        LinearProgram::Row row;
        row.coef.emplace_back(zi, 1.0);
        row.coef.emplace_back(x_of(m, i, j), -inst.fuel_capacity(m));
        row.sense = LinearProgram::RowSense::le;
        row.rhs = 0.0;
        lp.add_row(row);
      }
  if (variant == ProfitVariant::ts_op) {
    // whole-route fuel knapsack per vehicle
    for (int m = 0; m < M; ++m) {
      LinearProgram::Row row;
      for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j)
          if (x_of(m, i, j) >= 0)
            row.coef.emplace_back(x_of(m, i, j), inst.nominal_fuel(i, j, m));
      row.sense = LinearProgram::RowSense::le;
      row.rhs = inst.fuel_capacity(m);
      row.name = "knapsack_" + inst.vehicle_id(m);
      lp.add_row(row);
    }
  }

  for (int p = 0; p < inst.num_pois(); ++p) {
    double best = 0.0;
    for (int m = 0; m < M; ++m) best = std::max(best, inst.profit(inst.poi_vertex(p), m));
    model.max_total_profit += best;
  }
  return model;
}

FirstStageSolution decode_first_stage(const Instance& inst,
                                      const std::vector<std::vector<int>>& x_idx,
                                      const std::vector<std::vector<int>>& z_idx,
                                      const std::vector<double>& sol, double objective) {
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  FirstStageSolution fs;
  fs.objective = objective;
  fs.x.assign(M, std::vector<uint8_t>(V * V, 0));
  fs.z.assign(M, std::vector<double>(V * V, 0.0));
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        int a = inst.arc(i, j);
        if (x_idx[m][a] >= 0 && sol[x_idx[m][a]] > 0.5) {
          fs.x[m][a] = 1;
          // reconstruct substituted depot-outgoing flow
          if (inst.is_depot(i)) fs.z[m][a] = inst.nominal_fuel(i, j, m);
        }
        if (z_idx[m][a] >= 0 && fs.x[m][a]) fs.z[m][a] = sol[z_idx[m][a]];
      }
  return fs;
}

std::vector<double> per_vehicle_profit(const Instance& inst, const FirstStageSolution& fs) {
  std::vector<double> out(inst.num_vehicles(), 0.0);
  for (int m = 0; m < inst.num_vehicles(); ++m)
    for (int i = 0; i < inst.num_vertices(); ++i)
      for (int j = 0; j < inst.num_vertices(); ++j)
        if (i != j && inst.is_poi(j) && fs.x[m][inst.arc(i, j)])
          out[m] += inst.profit(j, m);
  return out;
}

double first_stage_profit(const Instance& inst, const FirstStageSolution& fs) {
  double total = 0.0;
  for (double v : per_vehicle_profit(inst, fs)) total += v;
  return total;
}

ProfitRecourse build_recourse_profit_at(const Instance& inst,
                                        const std::vector<std::vector<double>>& x,
                                        const Scenario& sc) {
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  auto usable = usable_arcs(inst);

  ProfitRecourse rec;
  LinearProgram& lp = rec.lp;
  lp.sense = LinearProgram::Sense::maximize;
  rec.v_idx.assign(M, std::vector<int>(V * V, -1));

  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        if (i == j || !usable[m][inst.arc(i, j)]) continue;
        double obj = inst.is_poi(j) ? -inst.profit(j, m) : 0.0;
        rec.v_idx[m][inst.arc(i, j)] =
            lp.add_var(0.0, 1.0, obj, false, arc_name(inst, "v", i, j, m));
      }
  auto v_of = [&](int m, int i, int j) { return rec.v_idx[m][inst.arc(i, j)]; };

  // flow-difference balance per POI and vehicle; for first-stage-feasible
  // points the z terms of the rhs collapse to (1-alpha)*sum_j f_ij*x_ij via
  // the flow equalities, so the rhs is written in x alone
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < inst.num_pois(); ++p) {
      int t = inst.poi_vertex(p);
      LinearProgram::Row row;
      double rhs = 0.0;
      double one_minus_alpha = 1.0 - sc.availability[m];
      for (int j = 0; j < V; ++j) {
        if (j == t) continue;
        if (v_of(m, t, j) >= 0)
          row.coef.emplace_back(v_of(m, t, j), sc.fuel[m][inst.arc(t, j)]);
        if (usable[m][inst.arc(t, j)])
          rhs += one_minus_alpha * inst.nominal_fuel(t, j, m) * x[m][inst.arc(t, j)];
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = rhs;
      rec.flow_rows.push_back({lp.add_row(row), t, m});
    }
  // v <= x
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        int vi = v_of(m, i, j);
        if (vi < 0) continue;
        LinearProgram::Row row;
        row.coef.emplace_back(vi, 1.0);
        row.sense = LinearProgram::RowSense::le;
        row.rhs = x[m][inst.arc(i, j)];
        rec.link_rows.push_back({lp.add_row(row), i, j, m});
      }
  // depot initialization rows (z_di = f_di * x_di substituted)
  for (int m = 0; m < M; ++m)
    for (int d = 0; d < inst.num_depots(); ++d)
      for (int i = 0; i < V; ++i) {
        if (i == d) continue;
        int vi = v_of(m, d, i);
        if (vi < 0) continue;
        double one_minus_alpha = 1.0 - sc.availability[m];
        LinearProgram::Row row;
        row.coef.emplace_back(vi, sc.fuel[m][inst.arc(d, i)]);
        row.sense = LinearProgram::RowSense::eq;
        row.rhs = one_minus_alpha * inst.nominal_fuel(d, i, m) * x[m][inst.arc(d, i)];
        rec.depot_rows.push_back({lp.add_row(row), d, i, m});
      }
  return rec;
}

ProfitRecourse build_recourse_profit(const Instance& inst, const FirstStageSolution& fs,
                                     const Scenario& sc) {
  std::vector<std::vector<double>> x(fs.x.size());
  for (size_t m = 0; m < fs.x.size(); ++m) x[m].assign(fs.x[m].begin(), fs.x[m].end());
  return build_recourse_profit_at(inst, x, sc);
}

double recourse_value_profit(const Instance& inst, const FirstStageSolution& fs,
                             const Scenario& sc) {
  auto rec = build_recourse_profit(inst, fs, sc);
  auto sol = solve_lp(rec.lp);
  if (sol.status != LpSolution::Status::optimal)
    throw std::runtime_error("profit recourse LP not optimal (recourse is relatively complete; "
                             "check scenario fuel/availability consistency)");
  return sol.objective;
}

TightnessReport verify_relaxation_tightness(const Instance& inst,
                                            const FirstStageSolution& fs,
                                            const Scenario& sc) {
  TightnessReport rep;
  auto rec = build_recourse_profit(inst, fs, sc);
  auto lp_sol = solve_lp(rec.lp);
  if (lp_sol.status != LpSolution::Status::optimal)
    throw std::runtime_error("relaxed recourse not optimal");
  rep.lp_value = lp_sol.objective;
  for (double v : lp_sol.x)
    rep.max_fractionality = std::max(rep.max_fractionality, std::fabs(v - std::round(v)));

  auto rec_int = build_recourse_profit(inst, fs, sc);
  for (auto& v : rec_int.lp.vars) v.integer = true;
  auto mip_sol = solve_mip(rec_int.lp);
  rep.mip_feasible = mip_sol.status == LpSolution::Status::optimal;
  rep.mip_value = rep.mip_feasible ? mip_sol.objective : std::nan("");
  rep.equal = rep.mip_feasible && std::fabs(rep.lp_value - rep.mip_value) <= 1e-6;
  return rep;
}

ProfitExtensive build_extensive_profit(const Instance& inst, const ScenarioSet& scenarios,
                                       ProfitVariant variant, int size_cap) {
  if (scenarios.scenarios.empty()) throw std::invalid_argument("no scenarios");
  {
    int arcs = 0;
    for (int i = 0; i < inst.num_vertices(); ++i)
      for (int j = 0; j < inst.num_vertices(); ++j)
        if (inst.arc_exists(i, j)) ++arcs;
    long long load = 1LL * scenarios.size() * arcs * inst.num_vehicles();
    if (load > size_cap)
      throw std::invalid_argument(
          "extensive form too large: |scenarios|*|arcs|*|vehicles| = " + std::to_string(load) +
          " exceeds cap " + std::to_string(size_cap) +
          "; use the decomposition or raise the cap");
  }

  auto base = build_first_stage_profit(inst, variant);
  ProfitExtensive ext;
  ext.lp = std::move(base.lp);
  ext.x_idx = std::move(base.x_idx);
  ext.z_idx = std::move(base.z_idx);

  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  auto usable = usable_arcs(inst);

  for (int s = 0; s < scenarios.size(); ++s) {
    const Scenario& sc = scenarios[s];
    const double p = sc.probability;
    ext.v_idx.emplace_back(M, std::vector<int>(V * V, -1));
    auto& v_idx = ext.v_idx.back();
    LinearProgram& lp = ext.lp;

    for (int m = 0; m < M; ++m)
      for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j) {
          if (i == j || !usable[m][inst.arc(i, j)]) continue;
          double obj = inst.is_poi(j) ? -p * inst.profit(j, m) : 0.0;
          v_idx[m][inst.arc(i, j)] = lp.add_var(
              0.0, 1.0, obj, false,
              arc_name(inst, ("v" + std::to_string(s)).c_str(), i, j, m));
        }
    auto v_of = [&](int m, int i, int j) { return v_idx[m][inst.arc(i, j)]; };
    auto x_of = [&](int m, int i, int j) { return ext.x_idx[m][inst.arc(i, j)]; };
    auto z_of = [&](int m, int i, int j) { return ext.z_idx[m][inst.arc(i, j)]; };

    for (int m = 0; m < M; ++m) {
      double alpha = sc.availability[m];
      // flow-difference balance
      for (int pq = 0; pq < inst.num_pois(); ++pq) {
        int t = inst.poi_vertex(pq);
        LinearProgram::Row row;
        for (int j = 0; j < V; ++j) {
          if (j == t) continue;
          if (v_of(m, t, j) >= 0)
            row.coef.emplace_back(v_of(m, t, j), sc.fuel[m][inst.arc(t, j)]);
          // rhs terms moved to the left: - (z_out - z_in - alpha*f*x_out)
          if (z_of(m, t, j) >= 0) row.coef.emplace_back(z_of(m, t, j), -1.0);
          if (inst.is_poi(j) && z_of(m, j, t) >= 0) row.coef.emplace_back(z_of(m, j, t), 1.0);
          if (inst.is_depot(j) && x_of(m, j, t) >= 0)
            row.coef.emplace_back(x_of(m, j, t), inst.nominal_fuel(j, t, m));
          if (x_of(m, t, j) >= 0)
            row.coef.emplace_back(x_of(m, t, j), alpha * inst.nominal_fuel(t, j, m));
        }
        row.sense = LinearProgram::RowSense::eq;
        row.rhs = 0.0;
        lp.add_row(row);
      }
      // v <= x
      for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j) {
          int vi = v_of(m, i, j);
          if (vi < 0) continue;
          LinearProgram::Row row;
          row.coef.emplace_back(vi, 1.0);
          row.coef.emplace_back(x_of(m, i, j), -1.0);
          row.sense = LinearProgram::RowSense::le;
          row.rhs = 0.0;
          lp.add_row(row);
        }
      // depot rows: f(omega)*v_di - z_di + alpha*f_nom*x_di = 0, with the
      // substituted z_di = f_nom*x_di giving (alpha-1)*f_nom*x_di + f*v = 0
      for (int d = 0; d < inst.num_depots(); ++d)
        for (int i = 0; i < V; ++i) {
          if (i == d) continue;
          int vi = v_of(m, d, i);
          if (vi < 0) continue;
          LinearProgram::Row row;
          row.coef.emplace_back(vi, sc.fuel[m][inst.arc(d, i)]);
          row.coef.emplace_back(x_of(m, d, i),
                                (alpha - 1.0) * inst.nominal_fuel(d, i, m));
          row.sense = LinearProgram::RowSense::eq;
          row.rhs = 0.0;
          lp.add_row(row);
        }
    }
  }
  return ext;
}

namespace {

TwoStageSolveResult finish_profit_solve(const Instance& inst, const ScenarioSet& scenarios,
                                        const std::vector<std::vector<int>>& x_idx,
                                        const std::vector<std::vector<int>>& z_idx,
                                        const LpSolution& sol) {
  TwoStageSolveResult out;
  out.status = sol.status;
  out.gap = sol.gap;
  out.nodes = sol.nodes;
  if (!sol.has_solution()) return out;
  out.objective = sol.objective;
  out.first_stage = decode_first_stage(inst, x_idx, z_idx, sol.x, sol.objective);
  out.vehicle_profit = per_vehicle_profit(inst, out.first_stage);
  auto extraction = extract_routes(inst, out.first_stage.x);
  if (extraction.ok) out.routes = std::move(extraction.routes);
  out.per_scenario_beta.reserve(scenarios.size());
  for (const auto& sc : scenarios.scenarios)
    out.per_scenario_beta.push_back(recourse_value_profit(inst, out.first_stage, sc));
  return out;
}

}  // namespace

TwoStageSolveResult solve_profit_extensive(const Instance& inst, const ScenarioSet& scenarios,
                                           ProfitVariant variant, const MipOptions& opts,
                                           int size_cap) {
  auto ext = build_extensive_profit(inst, scenarios, variant, size_cap);
  auto x_idx = ext.x_idx;  // hook owns a copy
  Instance inst_copy = inst;
  LazyHook hook = [inst_copy, x_idx](const std::vector<double>& point) {
    const int V = inst_copy.num_vertices();
    std::vector<std::vector<uint8_t>> x(x_idx.size(), std::vector<uint8_t>(V * V, 0));
    for (size_t m = 0; m < x_idx.size(); ++m)
      for (int a = 0; a < V * V; ++a)
        if (x_idx[m][a] >= 0 && point[x_idx[m][a]] > 0.5) x[m][a] = 1;
    std::vector<LinearProgram::Row> rows;
    for (const auto& viol : separate_subtours(inst_copy, x))
      rows.push_back(subtour_row(inst_copy, viol, x_idx));
    return rows;
  };
  auto sol = solve_mip(ext.lp, hook, opts);
  return finish_profit_solve(inst, scenarios, ext.x_idx, ext.z_idx, sol);
}

TwoStageSolveResult solve_profit_deterministic(const Instance& inst, ProfitVariant variant,
                                               const MipOptions& opts) {
  return solve_profit_extensive(inst, nominal_scenario_set(inst), variant, opts,
                                std::numeric_limits<int>::max());
}

}  // namespace stochroute

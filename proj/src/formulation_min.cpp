#include "stochroute/formulation_min.hpp"

#include <cmath>
#include <stdexcept>

#include "stochroute/subtour.hpp"

namespace stochroute {

namespace {

std::vector<std::vector<uint8_t>> usable_arcs_fuel(
    const Instance& inst, const std::vector<std::vector<double>>& fuel) {
  const int V = inst.num_vertices();
  std::vector<std::vector<uint8_t>> u(inst.num_vehicles(), std::vector<uint8_t>(V * V, 0));
  for (int m = 0; m < inst.num_vehicles(); ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j)
        if (inst.arc_exists(i, j) && fuel[m][inst.arc(i, j)] <= inst.fuel_capacity(m))
          u[m][inst.arc(i, j)] = 1;
  return u;
}

std::string arc_name(const Instance& inst, const std::string& prefix, int i, int j, int m) {
  return prefix + "_" + inst.vehicle_id(m) + "_" + inst.vertex_id(i) + "_" + inst.vertex_id(j);
}

// shared emitter for the routing block (x or a per-scenario y block):
// degree rows, exact-cover POI rows, flow rows with the given fuel matrix,
// capacity coupling. Returns nothing; fills rows into lp.
struct RoutingBlock {
  std::vector<std::vector<int>> arc_idx;   // [m][V*V] arc variables
  std::vector<std::vector<int>> flow_idx;  // [m][V*V] POI-outgoing flow vars
};

RoutingBlock emit_routing_block(const Instance& inst, LinearProgram& lp,
                                const std::vector<std::vector<double>>& fuel,
                                CostSource cost_source, double obj_weight,
                                const std::string& tag, bool arcs_integer) {
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  auto usable = usable_arcs_fuel(inst, fuel);
  RoutingBlock blk;
  blk.arc_idx.assign(M, std::vector<int>(V * V, -1));
  blk.flow_idx.assign(M, std::vector<int>(V * V, -1));

  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        if (i == j || !usable[m][inst.arc(i, j)]) continue;
        double obj = 0.0;
        if (obj_weight != 0.0) {
          double unit = cost_source == CostSource::nominal_fuel
                            ? inst.nominal_fuel(i, j, m)
                            : inst.travel_cost(i, j);
          obj = obj_weight * unit;
        }
        blk.arc_idx[m][inst.arc(i, j)] =
            lp.add_var(0.0, 1.0, obj, arcs_integer, arc_name(inst, tag, i, j, m));
      }
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i) {
      if (!inst.is_poi(i)) continue;
      for (int j = 0; j < V; ++j) {
        if (i == j || !usable[m][inst.arc(i, j)]) continue;
        blk.flow_idx[m][inst.arc(i, j)] = lp.add_var(
            0.0, inst.fuel_capacity(m), 0.0, false, arc_name(inst, tag + "f", i, j, m));
      }
    }

  auto a_of = [&](int m, int i, int j) { return blk.arc_idx[m][inst.arc(i, j)]; };
  auto f_of = [&](int m, int i, int j) { return blk.flow_idx[m][inst.arc(i, j)]; };
  const int d0 = inst.home_depot();

  for (int m = 0; m < M; ++m)
    for (int d = 1; d < inst.num_depots(); ++d) {
      LinearProgram::Row row;
      for (int j = 0; j < V; ++j) {
        if (a_of(m, d, j) >= 0) row.coef.emplace_back(a_of(m, d, j), 1.0);
        if (a_of(m, j, d) >= 0) row.coef.emplace_back(a_of(m, j, d), -1.0);
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = 0.0;
      lp.add_row(row);
    }
  for (int m = 0; m < M; ++m) {
    LinearProgram::Row out_row, in_row;
    for (int j = 0; j < V; ++j) {
      if (a_of(m, d0, j) >= 0) out_row.coef.emplace_back(a_of(m, d0, j), 1.0);
      if (a_of(m, j, d0) >= 0) in_row.coef.emplace_back(a_of(m, j, d0), 1.0);
    }
    out_row.sense = in_row.sense = LinearProgram::RowSense::eq;
    out_row.rhs = in_row.rhs = 1.0;
    lp.add_row(out_row);
    lp.add_row(in_row);
  }
  // every POI visited exactly once across the fleet
  for (int p = 0; p < inst.num_pois(); ++p) {
    int t = inst.poi_vertex(p);
    LinearProgram::Row in_row, out_row;
    for (int m = 0; m < M; ++m)
      for (int j = 0; j < V; ++j) {
        if (a_of(m, j, t) >= 0) in_row.coef.emplace_back(a_of(m, j, t), 1.0);
        if (a_of(m, t, j) >= 0) out_row.coef.emplace_back(a_of(m, t, j), 1.0);
      }
    in_row.sense = out_row.sense = LinearProgram::RowSense::eq;
    in_row.rhs = out_row.rhs = 1.0;
    lp.add_row(in_row);
    lp.add_row(out_row);
  }
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < inst.num_pois(); ++p) {
      int t = inst.poi_vertex(p);
      LinearProgram::Row row;
      for (int j = 0; j < V; ++j) {
        if (a_of(m, t, j) >= 0) row.coef.emplace_back(a_of(m, t, j), 1.0);
        if (a_of(m, j, t) >= 0) row.coef.emplace_back(a_of(m, j, t), -1.0);
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = 0.0;
      lp.add_row(row);
    }
  // fuel-flow accumulation at POIs (depot-outgoing flow substituted)
  for (int m = 0; m < M; ++m)
    for (int p = 0; p < inst.num_pois(); ++p) {
      int t = inst.poi_vertex(p);
      LinearProgram::Row row;
      for (int j = 0; j < V; ++j) {
        if (j == t) continue;
        if (f_of(m, t, j) >= 0) row.coef.emplace_back(f_of(m, t, j), 1.0);
        if (inst.is_poi(j) && f_of(m, j, t) >= 0) row.coef.emplace_back(f_of(m, j, t), -1.0);
        if (inst.is_depot(j) && a_of(m, j, t) >= 0)
          row.coef.emplace_back(a_of(m, j, t), -fuel[m][inst.arc(j, t)]);
        if (a_of(m, t, j) >= 0)
          row.coef.emplace_back(a_of(m, t, j), -fuel[m][inst.arc(t, j)]);
      }
      row.sense = LinearProgram::RowSense::eq;
      row.rhs = 0.0;
      lp.add_row(row);
    }
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        int fi = f_of(m, i, j);
        if (fi < 0) continue;
        LinearProgram::Row row;
        row.coef.emplace_back(fi, 1.0);
        row.coef.emplace_back(a_of(m, i, j), -inst.fuel_capacity(m));
        row.sense = LinearProgram::RowSense::le;
        row.rhs = 0.0;
        lp.add_row(row);
      }
  return blk;
}

}  // namespace

MinFirstStage build_first_stage_min(const Instance& inst, CostSource cost_source) {
  {
    auto viol = validate_instance(inst);
    if (!viol.empty())
      throw std::invalid_argument("invalid instance: " + viol.front().message +
                                  " (" + viol.front().field + " " + viol.front().entity + ")");
  }
  MinFirstStage model;
  model.lp.sense = LinearProgram::Sense::minimize;
  std::vector<std::vector<double>> nominal;
  for (int m = 0; m < inst.num_vehicles(); ++m) nominal.push_back(inst.nominal_fuel_matrix(m));
  auto blk = emit_routing_block(inst, model.lp, nominal, cost_source, 1.0, "x", true);
  model.x_idx = std::move(blk.arc_idx);
  model.z_idx = std::move(blk.flow_idx);
  return model;
}

double first_stage_cost(const Instance& inst, const FirstStageSolution& fs,
                        CostSource cost_source) {
  double total = 0.0;
  for (int m = 0; m < inst.num_vehicles(); ++m)
    for (int i = 0; i < inst.num_vertices(); ++i)
      for (int j = 0; j < inst.num_vertices(); ++j)
        if (i != j && fs.x[m][inst.arc(i, j)])
          total += cost_source == CostSource::nominal_fuel ? inst.nominal_fuel(i, j, m)
                                                           : inst.travel_cost(i, j);
  return total;
}

MinRecourse build_recourse_min(const Instance& inst, const FirstStageSolution& fs,
                               const Scenario& sc) {
  MinRecourse rec;
  rec.lp.sense = LinearProgram::Sense::minimize;
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();

  // y block priced at zero; the objective sits on ybar
  auto blk = emit_routing_block(inst, rec.lp, sc.fuel, CostSource::nominal_fuel, 0.0,
                                "y", true);
  rec.y_idx = std::move(blk.arc_idx);
  rec.zbar_idx = std::move(blk.flow_idx);

  rec.ybar_idx.assign(M, std::vector<int>(V * V, -1));
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) {
        int a = inst.arc(i, j);
        int yi = rec.y_idx[m][a];
        if (yi < 0) continue;
        if (fs.x[m][a]) continue;  // ybar >= y - 1 is slack; replayed arcs are free
        int bi = rec.lp.add_var(0.0, 1.0, sc.fuel[m][a], false, arc_name(inst, "yb", i, j, m));
        rec.ybar_idx[m][a] = bi;
        LinearProgram::Row row;  // ybar - y >= -x = 0
        row.coef.emplace_back(bi, 1.0);
        row.coef.emplace_back(yi, -1.0);
        row.sense = LinearProgram::RowSense::ge;
        row.rhs = 0.0;
        rec.lp.add_row(row);
      }
  return rec;
}

MinRecourseValue recourse_value_min(const Instance& inst, const FirstStageSolution& fs,
                                    const Scenario& sc, const MipOptions& opts) {
  auto rec = build_recourse_min(inst, fs, sc);
  auto y_idx = rec.y_idx;
  Instance inst_copy = inst;
  LazyHook hook = [inst_copy, y_idx](const std::vector<double>& point) {
    const int V = inst_copy.num_vertices();
    std::vector<std::vector<uint8_t>> y(y_idx.size(), std::vector<uint8_t>(V * V, 0));
    for (size_t m = 0; m < y_idx.size(); ++m)
      for (int a = 0; a < V * V; ++a)
        if (y_idx[m][a] >= 0 && point[y_idx[m][a]] > 0.5) y[m][a] = 1;
    std::vector<LinearProgram::Row> rows;
    for (const auto& viol : separate_subtours(inst_copy, y))
      rows.push_back(subtour_row(inst_copy, viol, y_idx));
    return rows;
  };
  auto sol = solve_mip(rec.lp, hook, opts);
  MinRecourseValue out;
  out.status = sol.status;
  if (!sol.has_solution()) return out;
  out.value = sol.objective;
  const int V = inst.num_vertices();
  out.y.assign(inst.num_vehicles(), std::vector<uint8_t>(V * V, 0));
  for (int m = 0; m < inst.num_vehicles(); ++m)
    for (int a = 0; a < V * V; ++a)
      if (rec.y_idx[m][a] >= 0 && sol.x[rec.y_idx[m][a]] > 0.5) out.y[m][a] = 1;
  return out;
}

MinExtensive build_extensive_min(const Instance& inst, const ScenarioSet& scenarios,
                                 CostSource cost_source, int size_cap) {
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
          "; evaluate via the single-vehicle dynamic program or shrink the scenario set");
  }

  MinExtensive ext;
  ext.lp.sense = LinearProgram::Sense::minimize;
  std::vector<std::vector<double>> nominal;
  for (int m = 0; m < inst.num_vehicles(); ++m) nominal.push_back(inst.nominal_fuel_matrix(m));
  auto first = emit_routing_block(inst, ext.lp, nominal, cost_source, 1.0, "x", true);
  ext.x_idx = std::move(first.arc_idx);
  ext.z_idx = std::move(first.flow_idx);

  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  for (int s = 0; s < scenarios.size(); ++s) {
    const Scenario& sc = scenarios[s];
    auto blk = emit_routing_block(inst, ext.lp, sc.fuel, cost_source, 0.0,
                                  "y" + std::to_string(s), true);
    ext.y_idx.push_back(std::move(blk.arc_idx));
    ext.ybar_idx.emplace_back(M, std::vector<int>(V * V, -1));
    auto& ybar = ext.ybar_idx.back();
    for (int m = 0; m < M; ++m)
      for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j) {
          int a = inst.arc(i, j);
          int yi = ext.y_idx[s][m][a];
          if (yi < 0) continue;
          int bi = ext.lp.add_var(0.0, 1.0, sc.probability * sc.fuel[m][a], false,
                                  arc_name(inst, "yb" + std::to_string(s), i, j, m));
          ybar[m][a] = bi;
          LinearProgram::Row row;  // ybar - y + x >= 0
          row.coef.emplace_back(bi, 1.0);
          row.coef.emplace_back(yi, -1.0);
          if (ext.x_idx[m][a] >= 0) row.coef.emplace_back(ext.x_idx[m][a], 1.0);
          row.sense = LinearProgram::RowSense::ge;
          row.rhs = 0.0;
          ext.lp.add_row(row);
        }
  }
  return ext;
}

TwoStageSolveResult solve_min_extensive(const Instance& inst, const ScenarioSet& scenarios,
                                        CostSource cost_source, const MipOptions& opts,
                                        int size_cap) {
  auto ext = build_extensive_min(inst, scenarios, cost_source, size_cap);
  // hook covers the first-stage block and every scenario's y block
  std::vector<std::vector<std::vector<int>>> blocks;
  blocks.push_back(ext.x_idx);
  for (const auto& y : ext.y_idx) blocks.push_back(y);
  Instance inst_copy = inst;
  LazyHook hook = [inst_copy, blocks](const std::vector<double>& point) {
    const int V = inst_copy.num_vertices();
    std::vector<LinearProgram::Row> rows;
    for (const auto& idx : blocks) {
      std::vector<std::vector<uint8_t>> sel(idx.size(), std::vector<uint8_t>(V * V, 0));
      for (size_t m = 0; m < idx.size(); ++m)
        for (int a = 0; a < V * V; ++a)
          if (idx[m][a] >= 0 && point[idx[m][a]] > 0.5) sel[m][a] = 1;
      for (const auto& viol : separate_subtours(inst_copy, sel))
        rows.push_back(subtour_row(inst_copy, viol, idx));
    }
    return rows;
  };
  MipOptions opts_prio = opts;
  opts_prio.branch_priority.assign(ext.lp.num_vars(), 0);
  for (const auto& per_vehicle : ext.x_idx)
    for (int idx : per_vehicle)
      if (idx >= 0) opts_prio.branch_priority[idx] = 1;
  auto sol = solve_mip(ext.lp, hook, opts_prio);

  TwoStageSolveResult out;
  out.status = sol.status;
  out.gap = sol.gap;
  out.nodes = sol.nodes;
  if (!sol.has_solution()) return out;
  out.objective = sol.objective;
  out.first_stage = decode_first_stage(inst, ext.x_idx, ext.z_idx, sol.x, sol.objective);
  auto extraction = extract_routes(inst, out.first_stage.x);
  if (extraction.ok) out.routes = std::move(extraction.routes);
  for (int s = 0; s < scenarios.size(); ++s) {
    double beta = 0.0;
    for (int m = 0; m < inst.num_vehicles(); ++m)
      for (int a = 0; a < inst.num_vertices() * inst.num_vertices(); ++a)
        if (ext.ybar_idx[s][m][a] >= 0)
          beta += scenarios[s].fuel[m][a] * sol.x[ext.ybar_idx[s][m][a]];
    out.per_scenario_beta.push_back(beta);
  }
  return out;
}

}  // namespace stochroute

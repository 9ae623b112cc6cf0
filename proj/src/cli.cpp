#include "stochroute/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "stochroute/generator.hpp"
#include "stochroute/json_io.hpp"
#include "stochroute/lshaped.hpp"
#include "stochroute/svg_report.hpp"

namespace stochroute {

namespace {

using nlohmann::json;
constexpr const char* kVersion = "stochroute 0.1.0";

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.out_dir) / name;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  write_text_file(out_path(cfg, name).string(), j.dump(2) + "\n");
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["instance"] = c.instance_path;
  j["scenarios_file"] = c.scenarios_path;
  j["out"] = c.out_dir;
  j["pois"] = c.pois;
  j["refuel"] = c.refuel;
  j["vehicles"] = c.vehicles;
  j["grid"] = c.grid;
  j["multiplier"] = c.multiplier;
  j["seed"] = c.seed;
  j["scenarios"] = c.scenarios;
  j["fuel_model"] = c.fuel_model;
  j["gamma_shape"] = c.gamma_shape;
  j["beta_alpha"] = c.beta_alpha;
  j["beta_beta"] = c.beta_beta;
  j["spread"] = c.spread;
  j["avail"] = c.avail;
  j["formulation"] = c.formulation;
  j["variant"] = c.variant;
  j["method"] = c.method;
  j["cost_source"] = c.cost_source;
  j["eps"] = c.eps;
  j["max_iters"] = c.max_iters;
  j["time_limit_s"] = c.time_limit_s;
  j["size_cap"] = c.size_cap;
  j["sweep_vehicle"] = c.sweep_vehicle;
  j["sweep_probs"] = c.sweep_probs;
  j["svg"] = c.emit_svg;
  j["full"] = c.full;
  j["bench_seeds"] = c.bench_seeds;
  return j;
}

void write_repro(const RunConfig& cfg) {
  json j;
  j["version"] = kVersion;
  j["config"] = config_json(cfg);
  write_json(cfg, "repro.json", j);
}

ProfitVariant parse_variant(const RunConfig& cfg) {
  if (cfg.variant == "ts") return ProfitVariant::ts;
  if (cfg.variant == "tsop" || cfg.variant == "ts-op") return ProfitVariant::ts_op;
  throw std::invalid_argument("unknown variant: " + cfg.variant);
}

CostSource parse_cost_source(const RunConfig& cfg) {
  if (cfg.cost_source == "nominal-fuel") return CostSource::nominal_fuel;
  if (cfg.cost_source == "travel-cost") return CostSource::travel_cost;
  throw std::invalid_argument("unknown cost source: " + cfg.cost_source);
}

json routes_json(const Instance& inst, const RouteSet& routes) {
  json j;
  for (int m = 0; m < static_cast<int>(routes.routes.size()); ++m) {
    json r = json::array();
    for (int v : routes.routes[m]) r.push_back(inst.vertex_id(v));
    j[inst.vehicle_id(m)] = r;
  }
  return j;
}

const char* status_name(LpSolution::Status s) {
  switch (s) {
    case LpSolution::Status::optimal: return "optimal";
    case LpSolution::Status::feasible: return "feasible";
    case LpSolution::Status::infeasible: return "infeasible";
    case LpSolution::Status::unbounded: return "unbounded";
    case LpSolution::Status::time_limit: return "time_limit";
    case LpSolution::Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

ScenarioSet load_or_nominal(const RunConfig& cfg, const Instance& inst) {
  if (cfg.scenarios_path.empty()) return nominal_scenario_set(inst);
  return load_scenarios(inst, cfg.scenarios_path);
}

int run_generate(const RunConfig& cfg) {
  GeneratorConfig gc;
  gc.grid_size = cfg.grid;
  gc.n_pois = cfg.pois;
  gc.n_refuel = cfg.refuel;
  gc.n_vehicles = cfg.vehicles;
  gc.capacity_multiplier = cfg.multiplier;
  gc.seed = cfg.seed;
  Instance inst = generate_instance(gc);

  ScenarioSet scens;
  if (!cfg.avail.empty()) {
    ScenarioConfig sc;
    sc.availability_probability = cfg.avail;
    if (static_cast<int>(cfg.avail.size()) != inst.num_vehicles())
      throw std::invalid_argument("--avail must list one probability per vehicle");
    scens = sample_availability_scenarios(inst, sc);
  } else if (cfg.fuel_model != "none") {
    ScenarioConfig sc;
    sc.n_scenarios = cfg.scenarios;
    sc.fuel_model = cfg.fuel_model == "gamma" ? ScenarioConfig::FuelModel::gamma
                                              : ScenarioConfig::FuelModel::beta;
    sc.gamma_shape = cfg.gamma_shape;
    sc.beta_alpha = cfg.beta_alpha;
    sc.beta_beta = cfg.beta_beta;
    sc.spread = cfg.spread;
    sc.seed = cfg.seed;
    scens = sample_fuel_scenarios(inst, sc);
  } else {
    scens = nominal_scenario_set(inst);
  }

  write_text_file(out_path(cfg, "instance.json").string(),
                  instance_to_json(inst).dump(2) + "\n");
  write_text_file(out_path(cfg, "scenarios.json").string(),
                  scenarios_to_json(inst, scens).dump(2) + "\n");
  write_repro(cfg);
  return 0;
}

int run_solve(const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  Instance inst = load_instance(cfg.instance_path);
  ScenarioSet scens = load_or_nominal(cfg, inst);
  {
    auto viol = validate_scenarios(inst, scens);
    if (!viol.empty())
      throw std::invalid_argument("invalid scenarios: " + viol.front().message);
  }

  std::string method = cfg.method;
  if (method.empty()) method = cfg.formulation == "min" ? "extensive" : "lshaped";

  json result;
  result["command"] = "solve";
  result["formulation"] = cfg.formulation;
  result["method"] = method;
  json stats;
  int exit_code = 0;

  if (cfg.formulation == "min") {
    if (method == "lshaped")
      throw std::invalid_argument(
          "the decomposition requires an LP-exact recourse; the min-cost recourse "
          "re-routes with binary variables, so only --method extensive applies");
    MipOptions mo;
    mo.time_limit_s = cfg.time_limit_s;
    if (!cfg.dump_lp_path.empty()) {
      auto ext = build_extensive_min(inst, scens, parse_cost_source(cfg), cfg.size_cap);
      write_text_file(cfg.dump_lp_path, write_lp_format(ext.lp, "extensive_min"));
    }
    auto res = solve_min_extensive(inst, scens, parse_cost_source(cfg), mo, cfg.size_cap);
    result["status"] = status_name(res.status);
    if (res.has_solution()) {
      result["objective"] = res.objective;
      result["gap"] = res.gap;
      result["routes"] = routes_json(inst, res.routes);
      result["per_scenario_beta"] = res.per_scenario_beta;
    }
    stats["nodes"] = res.nodes;
    if (res.status == LpSolution::Status::feasible) exit_code = 3;
    if (!res.has_solution()) exit_code = 4;
  } else {
    ProfitVariant variant = parse_variant(cfg);
    if (!cfg.dump_lp_path.empty()) {
      auto fs = build_first_stage_profit(inst, variant);
      write_text_file(cfg.dump_lp_path, write_lp_format(fs.lp, "profit_first_stage"));
    }
    if (method == "extensive") {
      MipOptions mo;
      mo.time_limit_s = cfg.time_limit_s;
      auto res = solve_profit_extensive(inst, scens, variant, mo, cfg.size_cap);
      result["status"] = status_name(res.status);
      if (res.has_solution()) {
        result["objective"] = res.objective;
        result["gap"] = res.gap;
        result["routes"] = routes_json(inst, res.routes);
        result["per_scenario_beta"] = res.per_scenario_beta;
        result["per_vehicle_profit"] = res.vehicle_profit;
      }
      stats["nodes"] = res.nodes;
      if (res.status == LpSolution::Status::feasible) exit_code = 3;
      if (!res.has_solution()) exit_code = 4;
    } else if (method == "lshaped") {
      LShapedOptions lo;
      lo.eps = cfg.eps;
      lo.max_iterations = cfg.max_iters;
      lo.time_limit_s = cfg.time_limit_s;
      auto res = run_lshaped(inst, scens, variant, lo);
      result["status"] = status_name(res.solve.status);
      result["converged"] = res.converged;
      result["stop_reason"] = res.stop_reason;
      result["iterations"] = res.solve.iterations;
      result["cuts"] = res.cuts.size();
      if (res.solve.has_solution()) {
        result["objective"] = res.solve.objective;
        result["lb"] = res.lb;
        result["ub"] = res.ub;
        result["routes"] = routes_json(inst, res.solve.routes);
        result["per_scenario_beta"] = res.solve.per_scenario_beta;
        result["per_vehicle_profit"] = res.solve.vehicle_profit;
      }
      write_text_file(out_path(cfg, "trace.csv").string(), bounds_trace_csv(res.trace));
      if (!res.converged) exit_code = res.solve.has_solution() ? 3 : 4;
    } else {
      throw std::invalid_argument("unknown method: " + method);
    }
  }
  write_json(cfg, "result.json", result);
  stats["wall_seconds"] = std::chrono::duration<double>(clock::now() - t0).count();
  write_json(cfg, "run_stats.json", stats);
  write_repro(cfg);
  return exit_code;
}

json report_json(const Instance& inst, const EvaluationReport& rep) {
  json j;
  j["formulation"] = rep.formulation == Formulation::min_cost ? "min" : "profit";
  j["rp"] = rep.rp;
  j["ev"] = rep.ev;
  j["eev"] = rep.eev;
  j["vss"] = rep.vss;
  j["vss_over_rp_pct"] = rep.vss_over_rp_pct;
  j["vss_over_eev_pct"] = rep.vss_over_eev_pct;
  j["rp_method"] = rep.rp_method;
  j["rp_is_upper_bound"] = rep.rp_is_upper_bound;
  j["partial"] = rep.partial;
  j["per_scenario_beta"] = rep.per_scenario_beta;
  if (!rep.vehicle_profit.empty()) {
    json pv;
    for (int m = 0; m < inst.num_vehicles(); ++m) pv[inst.vehicle_id(m)] = rep.vehicle_profit[m];
    j["per_vehicle_profit"] = pv;
  }
  return j;
}

int run_vss(const RunConfig& cfg) {
  Instance inst = load_instance(cfg.instance_path);
  ScenarioSet scens = load_or_nominal(cfg, inst);
  EvaluatorOptions eo;
  eo.cost_source = parse_cost_source(cfg);
  eo.variant = parse_variant(cfg);
  eo.extensive_cap = cfg.size_cap;
  eo.time_limit_s = cfg.time_limit_s;
  Formulation f = cfg.formulation == "min" ? Formulation::min_cost : Formulation::profit;
  auto rep = evaluate_vss(inst, scens, f, eo);

  write_json(cfg, "vss.json", report_json(inst, rep));
  {
    std::string csv = "scenario,probability,beta\n";
    char buf[96];
    for (size_t s = 0; s < rep.per_scenario_beta.size(); ++s) {
      std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", s, scens[s].probability,
                    rep.per_scenario_beta[s]);
      csv += buf;
    }
    write_text_file(out_path(cfg, "vss.csv").string(), csv);
  }
  if (cfg.emit_svg) {
    std::vector<std::pair<std::string, double>> bars{
        {"RP", rep.rp}, {"EV", rep.ev}, {"EEV", rep.eev}, {"VSS", rep.vss}};
    write_text_file(out_path(cfg, "vss.svg").string(),
                    svg_bar_chart("Value of the stochastic solution", bars));
  }
  json stats;
  stats["wall_seconds"] = rep.wall_seconds;
  write_json(cfg, "run_stats.json", stats);
  write_repro(cfg);
  return rep.partial ? 3 : 0;
}

int run_sweep(const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  Instance inst = load_instance(cfg.instance_path);
  if (cfg.sweep_vehicle < 1 || cfg.sweep_vehicle > inst.num_vehicles())
    throw std::invalid_argument("--vehicle must name a vehicle position (1-based)");
  EvaluatorOptions eo;
  eo.variant = parse_variant(cfg);
  eo.time_limit_s = cfg.time_limit_s;
  auto cases = availability_sweep(inst, cfg.sweep_probs, cfg.sweep_vehicle - 1, eo);

  json j;
  j["vehicle"] = inst.vehicle_id(cfg.sweep_vehicle - 1);
  j["cases"] = json::array();
  std::string csv = "probability,objective";
  for (int m = 0; m < inst.num_vehicles(); ++m) csv += ",profit_" + inst.vehicle_id(m);
  csv += "\n";
  std::vector<std::string> groups;
  std::vector<std::vector<double>> values;
  for (const auto& c : cases) {
    json cj;
    cj["probability"] = c.probability;
    cj["objective"] = c.objective;
    json pv;
    for (int m = 0; m < inst.num_vehicles(); ++m) pv[inst.vehicle_id(m)] = c.vehicle_profit[m];
    cj["per_vehicle_profit"] = pv;
    j["cases"].push_back(cj);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g", c.probability, c.objective);
    csv += buf;
    for (int m = 0; m < inst.num_vehicles(); ++m) {
      std::snprintf(buf, sizeof buf, ",%.9g", c.vehicle_profit[m]);
      csv += buf;
    }
    csv += "\n";
    char g[32];
    std::snprintf(g, sizeof g, "p=%.4g", c.probability);
    groups.push_back(g);
    values.push_back(c.vehicle_profit);
  }
  write_json(cfg, "sweep.json", j);
  write_text_file(out_path(cfg, "sweep.csv").string(), csv);
  if (cfg.emit_svg) {
    std::vector<std::string> series;
    for (int m = 0; m < inst.num_vehicles(); ++m) series.push_back(inst.vehicle_id(m));
    write_text_file(out_path(cfg, "sweep.svg").string(),
                    svg_grouped_bars("First-stage profit by availability case", groups,
                                     series, values));
  }
  json stats;
  stats["wall_seconds"] = std::chrono::duration<double>(clock::now() - t0).count();
  write_json(cfg, "run_stats.json", stats);
  write_repro(cfg);
  return 0;
}

int run_oracle(const RunConfig& cfg) {
  Instance inst = load_instance(cfg.instance_path);
  ScenarioSet scens = load_or_nominal(cfg, inst);
  Formulation f = cfg.formulation == "min" ? Formulation::min_cost : Formulation::profit;
  auto res = brute_force_optimum(inst, scens, f, {}, parse_variant(cfg),
                                 parse_cost_source(cfg));
  json j;
  j["objective"] = res.objective;
  j["routes"] = routes_json(inst, res.routes);
  j["candidates"] = res.candidates;
  write_json(cfg, "oracle.json", j);
  write_repro(cfg);
  return 0;
}

int run_bench(const RunConfig& cfg) {
  std::vector<int> poi_set = cfg.full ? std::vector<int>{10, 15, 20, 25, 30}
                                      : std::vector<int>{10, 15};
  std::vector<double> mults = cfg.full ? std::vector<double>{2.25, 2.5, 2.75, 3.0}
                                       : std::vector<double>{2.5, 3.0};
  int seeds = cfg.full ? 5 : cfg.bench_seeds;

  std::string csv = "pois,multiplier,seed,rp,ev,eev,vss,vss_over_rp_pct,rp_method,partial\n";
  json summary = json::array();
  bool any_partial = false;
  for (int pois : poi_set)
    for (double mult : mults)
      for (int s = 0; s < seeds; ++s) {
        GeneratorConfig gc;
        gc.n_pois = pois;
        gc.n_refuel = 4;
        gc.n_vehicles = 1;
        gc.capacity_multiplier = mult;
        gc.seed = cfg.seed + 1000ULL * s;
        Instance inst = generate_instance(gc);
        ScenarioConfig sc;
        sc.n_scenarios = cfg.scenarios;
        sc.fuel_model = ScenarioConfig::FuelModel::gamma;
        sc.gamma_shape = cfg.gamma_shape;
        sc.seed = gc.seed + 7;
        ScenarioSet scens = sample_fuel_scenarios(inst, sc);
        EvaluatorOptions eo;
        eo.time_limit_s = cfg.time_limit_s;
        json row;
        try {
          auto rep = evaluate_vss(inst, scens, Formulation::min_cost, eo);
          char buf[256];
          std::snprintf(buf, sizeof buf, "%d,%.4g,%d,%.9g,%.9g,%.9g,%.9g,%.6g,%s,%d\n",
                        pois, mult, s, rep.rp, rep.ev, rep.eev, rep.vss,
                        rep.vss_over_rp_pct, rep.rp_method.c_str(), (int)rep.partial);
          csv += buf;
          row["pois"] = pois;
          row["multiplier"] = mult;
          row["seed"] = s;
          row["vss_over_rp_pct"] = rep.vss_over_rp_pct;
          any_partial |= rep.partial;
        } catch (const std::exception& e) {
          row["pois"] = pois;
          row["multiplier"] = mult;
          row["seed"] = s;
          row["error"] = e.what();
          csv += std::to_string(pois) + "," + std::to_string(mult) + "," +
                 std::to_string(s) + ",,,,,,error,1\n";
          any_partial = true;
        }
        summary.push_back(row);
      }
  write_text_file(out_path(cfg, "bench.csv").string(), csv);
  json j;
  j["runs"] = summary;
  write_json(cfg, "bench.json", j);
  write_repro(cfg);
  return any_partial ? 3 : 0;
}

}  // namespace

int run(const RunConfig& config) {
  if (config.command == "generate") return run_generate(config);
  if (config.command == "solve") return run_solve(config);
  if (config.command == "vss") return run_vss(config);
  if (config.command == "sweep") return run_sweep(config);
  if (config.command == "oracle") return run_oracle(config);
  if (config.command == "bench") return run_bench(config);
  throw std::invalid_argument("unknown command: " + config.command);
}

}  // namespace stochroute

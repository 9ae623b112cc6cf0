#include <cstdio>
#include <cstdlib>
#include <exception>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochroute/cli.hpp"

using stochroute::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic path planning for fuel-constrained fleets"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env_out = std::getenv("STOCHROUTE_OUT")) cfg.out_dir = env_out;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", cfg.out_dir, "output directory");
  };

  auto* gen = app.add_subcommand("generate", "generate a random instance and scenarios");
  add_common(gen);
  gen->add_option("--pois", cfg.pois, "number of POIs");
  gen->add_option("--refuel", cfg.refuel, "number of refueling sites");
  gen->add_option("--vehicles", cfg.vehicles, "fleet size");
  gen->add_option("--grid", cfg.grid, "square grid size");
  gen->add_option("--multiplier", cfg.multiplier, "fuel capacity multiplier on lambda");
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--scenarios", cfg.scenarios, "number of fuel scenarios");
  gen->add_option("--fuel-model", cfg.fuel_model, "gamma | beta | none");
  gen->add_option("--gamma-shape", cfg.gamma_shape, "gamma shape parameter");
  gen->add_option("--beta-alpha", cfg.beta_alpha, "beta alpha");
  gen->add_option("--beta-beta", cfg.beta_beta, "beta beta");
  gen->add_option("--spread", cfg.spread, "beta support half-width fraction");
  gen->add_option("--avail", cfg.avail,
                  "per-vehicle availability probabilities (enumerated scenarios)")
      ->delimiter(',');

  auto add_model_flags = [&](CLI::App* cmd, bool with_scenarios) {
    add_common(cmd);
    cmd->add_option("--instance", cfg.instance_path, "instance JSON")->required();
    if (with_scenarios) cmd->add_option("--scenarios", cfg.scenarios_path, "scenario JSON");
    cmd->add_option("--formulation", cfg.formulation, "min | profit");
    cmd->add_option("--variant", cfg.variant, "ts | tsop");
    cmd->add_option("--cost-source", cfg.cost_source, "nominal-fuel | travel-cost");
    cmd->add_option("--time-limit", cfg.time_limit_s, "seconds");
    cmd->add_option("--size-cap", cfg.size_cap, "extensive-form size cap");
  };

  auto* solve = app.add_subcommand("solve", "solve a two-stage instance");
  add_model_flags(solve, true);
  solve->add_option("--method", cfg.method, "lshaped | extensive");
  bool extensive_flag = false;
  solve->add_flag("--extensive", extensive_flag, "shorthand for --method extensive");
  solve->add_option("--eps", cfg.eps, "decomposition gap tolerance");
  solve->add_option("--max-iters", cfg.max_iters, "decomposition iteration cap");
  solve->add_option("--dump-lp", cfg.dump_lp_path, "write the model in LP format");

  auto* vss = app.add_subcommand("vss", "evaluate RP / EV / EEV / VSS");
  add_model_flags(vss, true);
  vss->add_flag("--svg", cfg.emit_svg, "emit an SVG chart");

  auto* sweep = app.add_subcommand("sweep", "availability sweep for one vehicle");
  add_model_flags(sweep, false);
  sweep->add_option("--vehicle", cfg.sweep_vehicle, "swept vehicle (1-based)");
  sweep->add_option("--probs", cfg.sweep_probs, "availability probabilities")->delimiter(',');
  sweep->add_flag("--svg", cfg.emit_svg, "emit an SVG chart");

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum for small instances");
  add_model_flags(oracle, true);

  auto* bench = app.add_subcommand("bench", "replay the randomized experiment grid");
  add_common(bench);
  bench->add_option("--seed", cfg.seed, "base seed");
  bench->add_option("--seeds", cfg.bench_seeds, "seeds per configuration");
  bench->add_option("--scenarios", cfg.scenarios, "scenarios per run");
  bench->add_option("--gamma-shape", cfg.gamma_shape, "gamma shape parameter");
  bench->add_option("--time-limit", cfg.time_limit_s, "seconds per run");
  bench->add_flag("--full", cfg.full, "full-size grid with 5 seeds");

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  if (extensive_flag) cfg.method = "extensive";

  try {
    return stochroute::run(cfg);
  } catch (const std::invalid_argument& e) {
    nlohmann::json err{{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 4;
  }
}

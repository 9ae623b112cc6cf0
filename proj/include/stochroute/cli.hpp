#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochroute/evaluator.hpp"

namespace stochroute {

// Parsed command-line configuration; run() owns execution, file output and
// the repro manifest so every artifact is reproducible from flags alone.
struct RunConfig {
  std::string command;  // generate | solve | vss | sweep | oracle | bench
  std::string instance_path;
  std::string scenarios_path;
  std::string out_dir = ".";

  // generate
  int pois = 10;
  int refuel = 4;
  int vehicles = 3;
  double grid = 100.0;
  double multiplier = 2.5;
  uint64_t seed = 1;
  int scenarios = 20;
  std::string fuel_model = "gamma";  // gamma | beta | none
  double gamma_shape = 4.0;
  double beta_alpha = 2.0, beta_beta = 2.0, spread = 0.25;
  std::vector<double> avail;  // availability probabilities per vehicle

  // solve / vss / sweep
  std::string formulation = "profit";  // min | profit
  std::string variant = "ts";          // ts | tsop
  std::string method;                  // lshaped | extensive (default by formulation)
  std::string cost_source = "nominal-fuel";
  double eps = 1e-4;
  int max_iters = 500;
  double time_limit_s = 3600.0;
  int size_cap = 2000;
  int sweep_vehicle = 3;  // 1-based position of the swept vehicle
  std::vector<double> sweep_probs = {1.0, 0.75, 0.25, 0.0};
  bool emit_svg = false;
  std::string dump_lp_path;

  // bench
  bool full = false;
  int bench_seeds = 2;
};

// Executes one command; returns the process exit status:
// 0 success, 2 usage/validation error, 3 partial result (limit hit),
// 4 solver failure. Writes result files plus repro.json under out_dir.
int run(const RunConfig& config);

}  // namespace stochroute

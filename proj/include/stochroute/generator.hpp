#pragma once

#include <cstdint>
#include <vector>

#include "stochroute/instance.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute {

// Deterministic random stream (xoshiro-style over splitmix-seeded state).
// Hand-rolled so identical seeds give identical samples on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  uint64_t next_u64();
  double uniform();                       // [0,1)
  double uniform(double lo, double hi);
  double normal();                        // standard normal (Box-Muller)
  double gamma(double shape, double scale);
  double beta(double alpha, double beta);

 private:
  uint64_t s_[4];
};

struct GeneratorConfig {
  double grid_size = 100.0;
  int n_pois = 10;
  int n_refuel = 4;
  int n_vehicles = 3;
  double capacity_multiplier = 2.5;      // F_m = multiplier * lambda
  std::vector<double> vehicle_multipliers;  // optional per-vehicle override
  std::vector<double> fuel_economy;      // optional per-vehicle fuel scale (default 1)
  bool with_profits = true;
  double profit_min = 10.0, profit_max = 50.0;  // integer draws in [min,max]
  uint64_t seed = 1;
};

struct ScenarioConfig {
  enum class FuelModel { none, gamma, beta };
  int n_scenarios = 20;
  FuelModel fuel_model = FuelModel::gamma;
  double gamma_shape = 4.0;
  double beta_alpha = 2.0, beta_beta = 2.0;
  double spread = 0.25;  // beta support half-width as a fraction of nominal
  std::vector<double> availability_probability;  // per vehicle, for enumeration
  uint64_t seed = 1;
};

// POIs uniform on the square; home depot at the center, refueling sites at
// the quarter points; lambda = max depot-to-POI distance; F = multiplier *
// lambda; fuel and cost are Euclidean distances rounded down to integers.
Instance generate_instance(const GeneratorConfig& config);

// Per-arc fuel draws, mean-preserving around the nominal: gamma(shape k,
// scale nominal/k) or nominal*(1-spread) + nominal*2*spread*Beta(a,b).
// Equal probabilities; availability all ones.
ScenarioSet sample_fuel_scenarios(const Instance& inst, const ScenarioConfig& config);

// Exact enumeration of the availability support (product of Bernoullis),
// zero-probability atoms dropped; fuel fixed at nominal.
ScenarioSet sample_availability_scenarios(const Instance& inst,
                                          const ScenarioConfig& config);

}  // namespace stochroute

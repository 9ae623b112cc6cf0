#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stochroute/generator.hpp"
#include "stochroute/instance.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute::testing {

// Hand-built instance: home depot at (0,0), explicit refuel sites and POIs,
// Euclidean (unrounded) fuel and cost, uniform capacity, flat profit 10
// unless overridden.
inline Instance tiny_instance(std::vector<Point> pois, std::vector<Point> refuels, double F,
                              int vehicles = 1, double profit_value = 10.0) {
  std::vector<std::string> rid, pid, vid;
  std::vector<double> caps;
  for (size_t i = 0; i < refuels.size(); ++i) rid.push_back("d" + std::to_string(i + 1));
  for (size_t i = 0; i < pois.size(); ++i) pid.push_back("t" + std::to_string(i + 1));
  for (int m = 0; m < vehicles; ++m) {
    vid.push_back("v" + std::to_string(m + 1));
    caps.push_back(F);
  }
  Instance inst = Instance::create("d0", rid, pid, vid, caps);
  std::vector<Point> coords{{0, 0}};
  for (auto& p : refuels) coords.push_back(p);
  for (auto& p : pois) coords.push_back(p);
  const int V = inst.num_vertices();
  std::vector<double> cost(V * V, 0.0);
  std::vector<std::vector<double>> fuel(vehicles, std::vector<double>(V * V, 0.0));
  for (int i = 0; i < V; ++i)
    for (int j = 0; j < V; ++j) {
      if (i == j) continue;
      double d = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
      cost[i * V + j] = d;
      for (int m = 0; m < vehicles; ++m) fuel[m][i * V + j] = d;
    }
  inst.set_coordinates(coords);
  inst.set_travel_cost(cost);
  inst.set_nominal_fuel(fuel);
  std::vector<std::vector<double>> profit(vehicles,
                                          std::vector<double>(pois.size(), profit_value));
  inst.set_profit(profit);
  return inst;
}

inline ScenarioSet availability_set(const Instance& inst, std::vector<double> probs) {
  ScenarioConfig sc;
  sc.availability_probability = std::move(probs);
  return sample_availability_scenarios(inst, sc);
}

inline ScenarioSet gamma_set(const Instance& inst, int n, double shape, uint64_t seed) {
  ScenarioConfig sc;
  sc.n_scenarios = n;
  sc.fuel_model = ScenarioConfig::FuelModel::gamma;
  sc.gamma_shape = shape;
  sc.seed = seed;
  return sample_fuel_scenarios(inst, sc);
}

}  // namespace stochroute::testing

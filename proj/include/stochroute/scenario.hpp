#pragma once

#include <string>
#include <vector>

#include "stochroute/instance.hpp"

namespace stochroute {

// One realization of per-arc per-vehicle fuel consumption plus per-vehicle
// availability. availability is all-ones when only fuel is uncertain.
struct Scenario {
  double probability = 1.0;
  std::vector<std::vector<double>> fuel;  // [vehicle][V*V], same layout as Instance
  std::vector<uint8_t> availability;      // [vehicle], 0/1

  double fuel_on(const Instance& inst, int from, int to, int m) const {
    return fuel[m][inst.arc(from, to)];
  }
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;

  int size() const { return static_cast<int>(scenarios.size()); }
  const Scenario& operator[](int i) const { return scenarios[i]; }

  // Probability-weighted mean fuel per (vehicle, arc).
  std::vector<std::vector<double>> mean_fuel() const;
  bool all_available() const;
  bool fuel_equals(const std::vector<std::vector<double>>& nominal, double tol = 1e-12) const;
};

// Nominal-fuel, all-available singleton set (probability 1).
ScenarioSet nominal_scenario_set(const Instance& inst);

struct ScenarioViolation {
  std::string field;
  std::string entity;
  std::string message;
};

// Checks probabilities sum to 1 within 1e-9, entries finite/nonnegative and
// shaped for the instance.
std::vector<ScenarioViolation> validate_scenarios(const Instance& inst, const ScenarioSet& set);

}  // namespace stochroute

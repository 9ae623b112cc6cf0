#include "stochroute/scenario.hpp"

#include <cmath>

namespace stochroute {

std::vector<std::vector<double>> ScenarioSet::mean_fuel() const {
  std::vector<std::vector<double>> mean;
  if (scenarios.empty()) return mean;
  const auto& first = scenarios.front().fuel;
  mean.assign(first.size(), std::vector<double>(first[0].size(), 0.0));
  for (const auto& sc : scenarios)
    for (size_t m = 0; m < mean.size(); ++m)
      for (size_t a = 0; a < mean[m].size(); ++a)
        mean[m][a] += sc.probability * sc.fuel[m][a];
  return mean;
}

bool ScenarioSet::all_available() const {
  for (const auto& sc : scenarios)
    for (uint8_t a : sc.availability)
      if (!a) return false;
  return true;
}

bool ScenarioSet::fuel_equals(const std::vector<std::vector<double>>& nominal,
                              double tol) const {
  for (const auto& sc : scenarios)
    for (size_t m = 0; m < sc.fuel.size(); ++m)
      for (size_t a = 0; a < sc.fuel[m].size(); ++a)
        if (std::fabs(sc.fuel[m][a] - nominal[m][a]) > tol) return false;
  return true;
}

ScenarioSet nominal_scenario_set(const Instance& inst) {
  Scenario sc;
  sc.probability = 1.0;
  sc.availability.assign(inst.num_vehicles(), 1);
  for (int m = 0; m < inst.num_vehicles(); ++m)
    sc.fuel.push_back(inst.nominal_fuel_matrix(m));
  ScenarioSet set;
  set.scenarios.push_back(std::move(sc));
  return set;
}

std::vector<ScenarioViolation> validate_scenarios(const Instance& inst,
                                                  const ScenarioSet& set) {
  std::vector<ScenarioViolation> out;
  const int M = inst.num_vehicles();
  const size_t A = static_cast<size_t>(inst.num_vertices()) * inst.num_vertices();

  if (set.scenarios.empty()) {
    out.push_back({"scenarios", "", "scenario set is empty"});
    return out;
  }
  double total = 0.0;
  for (int s = 0; s < set.size(); ++s) {
    const auto& sc = set.scenarios[s];
    const std::string tag = "scenario " + std::to_string(s);
    if (!(sc.probability > 0.0) || sc.probability > 1.0 + 1e-12)
      out.push_back({"probability", tag, "probability must lie in (0,1]"});
    total += sc.probability;
    if (sc.fuel.size() != static_cast<size_t>(M))
      out.push_back({"fuel", tag, "fuel matrix count does not match vehicles"});
    else
      for (int m = 0; m < M; ++m) {
        if (sc.fuel[m].size() != A) {
          out.push_back({"fuel", tag + "/" + inst.vehicle_id(m), "fuel matrix size mismatch"});
          continue;
        }
        for (size_t a = 0; a < A; ++a) {
          double f = sc.fuel[m][a];
          if (!std::isfinite(f) || f < 0.0) {
            out.push_back({"fuel", tag + "/" + inst.vehicle_id(m),
                           "fuel entry not finite and nonnegative"});
            break;
          }
        }
      }
    if (sc.availability.size() != static_cast<size_t>(M))
      out.push_back({"availability", tag, "availability size does not match vehicles"});
  }
  if (std::fabs(total - 1.0) > 1e-9)
    out.push_back({"probability", "", "probabilities do not sum to 1"});
  return out;
}

}  // namespace stochroute

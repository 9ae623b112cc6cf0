#include "stochroute/instance.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace stochroute {

Instance Instance::create(std::string home_depot_id,
                          std::vector<std::string> refuel_depot_ids,
                          std::vector<std::string> poi_ids,
                          std::vector<std::string> vehicle_ids,
                          std::vector<double> fuel_capacity) {
  Instance inst;
  inst.vertex_ids_.push_back(std::move(home_depot_id));
  for (auto& id : refuel_depot_ids) inst.vertex_ids_.push_back(std::move(id));
  inst.n_depots_ = static_cast<int>(inst.vertex_ids_.size());
  for (auto& id : poi_ids) inst.vertex_ids_.push_back(std::move(id));
  inst.vehicle_ids_ = std::move(vehicle_ids);
  inst.fuel_capacity_ = std::move(fuel_capacity);
  if (inst.fuel_capacity_.size() != inst.vehicle_ids_.size())
    throw std::invalid_argument("fuel_capacity size must match vehicle count");
  std::set<std::string> seen(inst.vertex_ids_.begin(), inst.vertex_ids_.end());
  if (seen.size() != inst.vertex_ids_.size())
    throw std::invalid_argument("duplicate vertex id");
  return inst;
}

int Instance::vertex_index(const std::string& id) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertex_ids_[v] == id) return v;
  return -1;
}

int Instance::vehicle_index(const std::string& id) const {
  for (int m = 0; m < num_vehicles(); ++m)
    if (vehicle_ids_[m] == id) return m;
  return -1;
}

std::vector<InstanceViolation> validate_instance(const Instance& inst) {
  std::vector<InstanceViolation> out;
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();

  if (inst.num_pois() < 0)
    out.push_back({"pois", "", "negative POI count"});
  if (M == 0) out.push_back({"vehicles", "", "no vehicles"});

  for (int m = 0; m < M; ++m) {
    double f = inst.fuel_capacity(m);
    if (!(f > 0.0) || !std::isfinite(f))
      out.push_back({"fuel_capacity", inst.vehicle_id(m),
                     "fuel capacity must be positive and finite"});
  }

  // nominal fuel / travel cost defined (finite, nonnegative) on every arc
  for (int i = 0; i < V; ++i) {
    for (int j = 0; j < V; ++j) {
      if (!inst.arc_exists(i, j)) continue;
      const std::string arc_id = inst.vertex_id(i) + "->" + inst.vertex_id(j);
      double c = inst.travel_cost(i, j);
      if (!std::isfinite(c) || c < 0.0)
        out.push_back({"travel_cost", arc_id, "travel cost missing or negative"});
      for (int m = 0; m < M; ++m) {
        double f = inst.nominal_fuel(i, j, m);
        if (!std::isfinite(f) || f < 0.0)
          out.push_back({"nominal_fuel", arc_id + "/" + inst.vehicle_id(m),
                         "nominal fuel missing or negative"});
      }
    }
  }

  if (inst.has_profits()) {
    for (int p = 0; p < inst.num_pois(); ++p) {
      int v = inst.poi_vertex(p);
      for (int m = 0; m < M; ++m) {
        double pr = inst.profit(v, m);
        if (!std::isfinite(pr) || pr < 0.0)
          out.push_back({"profit", inst.vertex_id(v) + "/" + inst.vehicle_id(m),
                         "profit missing or negative"});
      }
    }
  }

  if (inst.has_coordinates() &&
      inst.coordinates().size() != static_cast<size_t>(V))
    out.push_back({"coordinates", "", "coordinate count does not match vertex count"});

  return out;
}

}  // namespace stochroute

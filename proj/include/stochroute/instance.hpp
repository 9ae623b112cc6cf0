#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stochroute {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Immutable problem data. Vertices are indexed densely: home depot first,
// then refueling depots in input order, then POIs in input order, so that
// solver variable order is reproducible across runs.
//
// Arc data (nominal fuel, travel cost) is stored as dense V*V matrices with
// the diagonal unused (no self-loops). An arc may be marked absent for
// sparse instances; the default is the complete digraph.
class Instance {
 public:
  Instance() = default;

  // --- construction -------------------------------------------------------
  // ids must be unique across depots and POIs.
  static Instance create(std::string home_depot_id,
                         std::vector<std::string> refuel_depot_ids,
                         std::vector<std::string> poi_ids,
                         std::vector<std::string> vehicle_ids,
                         std::vector<double> fuel_capacity);

  void set_coordinates(std::vector<Point> coords) { coords_ = std::move(coords); }
  // fuel[m][a] for arc index a = from*V+to
  void set_nominal_fuel(std::vector<std::vector<double>> fuel) { nominal_fuel_ = std::move(fuel); }
  void set_travel_cost(std::vector<double> cost) { travel_cost_ = std::move(cost); }
  // profit[m][p] for POI ordinal p (0-based over POIs)
  void set_profit(std::vector<std::vector<double>> profit) { profit_ = std::move(profit); }
  void set_arc_present(std::vector<uint8_t> present) { arc_present_ = std::move(present); }

  // --- sizes & index helpers ----------------------------------------------
  int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
  int num_depots() const { return n_depots_; }        // home + refuel sites
  int num_refuel_depots() const { return n_depots_ - 1; }
  int num_pois() const { return num_vertices() - n_depots_; }
  int num_vehicles() const { return static_cast<int>(vehicle_ids_.size()); }
  int home_depot() const { return 0; }

  bool is_depot(int v) const { return v < n_depots_; }
  bool is_poi(int v) const { return v >= n_depots_; }
  int poi_ordinal(int v) const { return v - n_depots_; }  // 0-based POI position
  int poi_vertex(int ordinal) const { return n_depots_ + ordinal; }

  int arc(int from, int to) const { return from * num_vertices() + to; }
  bool arc_exists(int from, int to) const {
    return from != to && (arc_present_.empty() || arc_present_[arc(from, to)] != 0);
  }

  const std::string& vertex_id(int v) const { return vertex_ids_[v]; }
  const std::string& vehicle_id(int m) const { return vehicle_ids_[m]; }
  // -1 when unknown
  int vertex_index(const std::string& id) const;
  int vehicle_index(const std::string& id) const;

  // --- data accessors ------------------------------------------------------
  double fuel_capacity(int m) const { return fuel_capacity_[m]; }
  double nominal_fuel(int from, int to, int m) const { return nominal_fuel_[m][arc(from, to)]; }
  const std::vector<double>& nominal_fuel_matrix(int m) const { return nominal_fuel_[m]; }
  double travel_cost(int from, int to) const { return travel_cost_[arc(from, to)]; }
  double profit(int poi_vertex, int m) const { return profit_[m][poi_ordinal(poi_vertex)]; }
  bool has_profits() const { return !profit_.empty(); }
  bool has_coordinates() const { return coords_.has_value(); }
  const std::vector<Point>& coordinates() const { return *coords_; }

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<std::string> vehicle_ids_;
  int n_depots_ = 0;
  std::vector<double> fuel_capacity_;
  std::vector<std::vector<double>> nominal_fuel_;  // [vehicle][V*V]
  std::vector<double> travel_cost_;                // [V*V]
  std::vector<std::vector<double>> profit_;        // [vehicle][num_pois]
  std::vector<uint8_t> arc_present_;               // empty => complete digraph
  std::optional<std::vector<Point>> coords_;
};

// One violation of an Instance invariant; empty list means the instance is
// well formed. Violations are data, not failures.
struct InstanceViolation {
  std::string field;   // offending field, e.g. "fuel_capacity"
  std::string entity;  // offending entity id, e.g. vehicle or arc id
  std::string message;
};

std::vector<InstanceViolation> validate_instance(const Instance& inst);

}  // namespace stochroute

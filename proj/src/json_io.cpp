#include "stochroute/json_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stochroute {

using nlohmann::json;

namespace {

json vertex_json(const Instance& inst, int v) {
  json j;
  j["id"] = inst.vertex_id(v);
  if (inst.has_coordinates()) {
    j["x"] = inst.coordinates()[v].x;
    j["y"] = inst.coordinates()[v].y;
  }
  return j;
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json j;
  j["home_depot"] = vertex_json(inst, inst.home_depot());
  j["refuel_depots"] = json::array();
  for (int v = 1; v < inst.num_depots(); ++v)
    j["refuel_depots"].push_back(vertex_json(inst, v));
  j["pois"] = json::array();
  for (int p = 0; p < inst.num_pois(); ++p)
    j["pois"].push_back(vertex_json(inst, inst.poi_vertex(p)));
  j["vehicles"] = json::array();
  for (int m = 0; m < inst.num_vehicles(); ++m)
    j["vehicles"].push_back({{"id", inst.vehicle_id(m)},
                             {"fuel_capacity", inst.fuel_capacity(m)}});
  // arcs always written explicitly so emitted files are self-describing
  json arcs = json::array();
  for (int i = 0; i < inst.num_vertices(); ++i)
    for (int k = 0; k < inst.num_vertices(); ++k) {
      if (!inst.arc_exists(i, k)) continue;
      json a;
      a["from"] = inst.vertex_id(i);
      a["to"] = inst.vertex_id(k);
      a["cost"] = inst.travel_cost(i, k);
      json fuel;
      for (int m = 0; m < inst.num_vehicles(); ++m)
        fuel[inst.vehicle_id(m)] = inst.nominal_fuel(i, k, m);
      a["fuel"] = fuel;
      arcs.push_back(a);
    }
  j["arcs"] = arcs;
  if (inst.has_profits()) {
    json profits;
    for (int p = 0; p < inst.num_pois(); ++p) {
      int v = inst.poi_vertex(p);
      json per_vehicle;
      for (int m = 0; m < inst.num_vehicles(); ++m)
        per_vehicle[inst.vehicle_id(m)] = inst.profit(v, m);
      profits[inst.vertex_id(v)] = per_vehicle;
    }
    j["profits"] = profits;
  }
  return j;
}

Instance instance_from_json(const json& j) {
  auto id_of = [](const json& node) { return node.at("id").get<std::string>(); };

  std::vector<std::string> refuel, pois, vehicles;
  std::vector<double> caps;
  for (const auto& d : j.value("refuel_depots", json::array())) refuel.push_back(id_of(d));
  for (const auto& p : j.at("pois")) pois.push_back(id_of(p));
  for (const auto& v : j.at("vehicles")) {
    vehicles.push_back(id_of(v));
    caps.push_back(v.at("fuel_capacity").get<double>());
  }
  Instance inst = Instance::create(id_of(j.at("home_depot")), refuel, pois, vehicles, caps);

  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();

  bool have_coords = j.at("home_depot").contains("x");
  if (have_coords) {
    std::vector<Point> coords(V);
    auto put = [&](const json& node) {
      int v = inst.vertex_index(node.at("id").get<std::string>());
      coords[v] = {node.at("x").get<double>(), node.at("y").get<double>()};
    };
    put(j.at("home_depot"));
    for (const auto& d : j.value("refuel_depots", json::array())) put(d);
    for (const auto& p : j.at("pois")) put(p);
    inst.set_coordinates(std::move(coords));
  }

  std::vector<std::vector<double>> fuel(M, std::vector<double>(V * V, 0.0));
  std::vector<double> cost(V * V, 0.0);
  if (j.contains("arcs")) {
    std::vector<uint8_t> present(V * V, 0);
    for (const auto& a : j.at("arcs")) {
      int from = inst.vertex_index(a.at("from").get<std::string>());
      int to = inst.vertex_index(a.at("to").get<std::string>());
      if (from < 0 || to < 0)
        throw std::invalid_argument("arc references unknown vertex id");
      int idx = inst.arc(from, to);
      present[idx] = 1;
      cost[idx] = a.at("cost").get<double>();
      const auto& f = a.at("fuel");
      if (f.is_number()) {
        for (int m = 0; m < M; ++m) fuel[m][idx] = f.get<double>();
      } else {
        for (int m = 0; m < M; ++m)
          fuel[m][idx] = f.at(inst.vehicle_id(m)).get<double>();
      }
    }
    bool complete = true;
    for (int i = 0; i < V && complete; ++i)
      for (int k = 0; k < V; ++k)
        if (i != k && !present[inst.arc(i, k)]) {
          complete = false;
          break;
        }
    if (!complete) inst.set_arc_present(std::move(present));
  } else {
    if (!have_coords)
      throw std::invalid_argument("instance needs either coordinates or an arcs override");
    const auto& coords = inst.coordinates();
    for (int i = 0; i < V; ++i)
      for (int k = 0; k < V; ++k) {
        if (i == k) continue;
        double d = std::hypot(coords[i].x - coords[k].x, coords[i].y - coords[k].y);
        double rounded = std::floor(d);
        cost[inst.arc(i, k)] = rounded;
        for (int m = 0; m < M; ++m) fuel[m][inst.arc(i, k)] = rounded;
      }
  }
  inst.set_travel_cost(std::move(cost));
  inst.set_nominal_fuel(std::move(fuel));

  if (j.contains("profits")) {
    std::vector<std::vector<double>> profit(M, std::vector<double>(inst.num_pois(), 0.0));
    for (const auto& [poi_id, per_vehicle] : j.at("profits").items()) {
      int v = inst.vertex_index(poi_id);
      if (v < 0 || !inst.is_poi(v))
        throw std::invalid_argument("profit references unknown POI " + poi_id);
      if (per_vehicle.is_number()) {
        for (int m = 0; m < M; ++m) profit[m][inst.poi_ordinal(v)] = per_vehicle.get<double>();
      } else {
        for (int m = 0; m < M; ++m)
          profit[m][inst.poi_ordinal(v)] =
              per_vehicle.at(inst.vehicle_id(m)).get<double>();
      }
    }
    inst.set_profit(std::move(profit));
  }
  return inst;
}

json scenarios_to_json(const Instance& inst, const ScenarioSet& set) {
  json j;
  j["scenarios"] = json::array();
  for (const auto& sc : set.scenarios) {
    json s;
    s["p"] = sc.probability;
    json avail;
    for (int m = 0; m < inst.num_vehicles(); ++m)
      avail[inst.vehicle_id(m)] = static_cast<int>(sc.availability[m]);
    s["availability"] = avail;
    json fuel;
    for (int m = 0; m < inst.num_vehicles(); ++m) {
      json per_from;
      for (int i = 0; i < inst.num_vertices(); ++i) {
        json per_to;
        for (int k = 0; k < inst.num_vertices(); ++k)
          if (inst.arc_exists(i, k)) per_to[inst.vertex_id(k)] = sc.fuel[m][inst.arc(i, k)];
        per_from[inst.vertex_id(i)] = per_to;
      }
      fuel[inst.vehicle_id(m)] = per_from;
    }
    s["fuel"] = fuel;
    j["scenarios"].push_back(s);
  }
  return j;
}

ScenarioSet scenarios_from_json(const Instance& inst, const json& j) {
  ScenarioSet set;
  const int M = inst.num_vehicles();
  for (const auto& s : j.at("scenarios")) {
    Scenario sc;
    sc.probability = s.at("p").get<double>();
    sc.availability.assign(M, 1);
    if (s.contains("availability"))
      for (const auto& [vid, val] : s.at("availability").items()) {
        int m = inst.vehicle_index(vid);
        if (m < 0) throw std::invalid_argument("availability references unknown vehicle " + vid);
        sc.availability[m] = val.get<int>() ? 1 : 0;
      }
    for (int m = 0; m < M; ++m) sc.fuel.push_back(inst.nominal_fuel_matrix(m));
    if (s.contains("fuel"))
      for (const auto& [vid, per_from] : s.at("fuel").items()) {
        int m = inst.vehicle_index(vid);
        if (m < 0) throw std::invalid_argument("fuel references unknown vehicle " + vid);
        for (const auto& [from_id, per_to] : per_from.items()) {
          int i = inst.vertex_index(from_id);
          if (i < 0) throw std::invalid_argument("fuel references unknown vertex " + from_id);
          for (const auto& [to_id, val] : per_to.items()) {
            int k = inst.vertex_index(to_id);
            if (k < 0) throw std::invalid_argument("fuel references unknown vertex " + to_id);
            sc.fuel[m][inst.arc(i, k)] = val.get<double>();
          }
        }
      }
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

Instance load_instance(const std::string& path) {
  return instance_from_json(json::parse(read_text_file(path)));
}

ScenarioSet load_scenarios(const Instance& inst, const std::string& path) {
  return scenarios_from_json(inst, json::parse(read_text_file(path)));
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace stochroute

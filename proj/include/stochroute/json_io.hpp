#pragma once

#include <string>

#include <json.hpp>

#include "stochroute/instance.hpp"
#include "stochroute/scenario.hpp"

namespace stochroute {

// Instance schema:
//   {"pois":[{"id","x","y"}], "home_depot":{"id","x","y"},
//    "refuel_depots":[{"id","x","y"}], "vehicles":[{"id","fuel_capacity"}],
//    "arcs": optional [{"from","to","cost","fuel":{vehicle:value}}],
//    "profits": optional {poi:{vehicle:value}}}
// Without an "arcs" override, fuel and cost default to the Euclidean
// distance between coordinates rounded down to the nearest integer.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

// Scenario schema: {"scenarios":[{"p", "fuel":{vehicle:{from:{to:value}}},
//                                 "availability":{vehicle:0|1}}]}
// A scenario may omit "fuel" (meaning nominal) or "availability" (all ones).
nlohmann::json scenarios_to_json(const Instance& inst, const ScenarioSet& set);
ScenarioSet scenarios_from_json(const Instance& inst, const nlohmann::json& j);

Instance load_instance(const std::string& path);
ScenarioSet load_scenarios(const Instance& inst, const std::string& path);

// Atomic write (temp file + rename); creates parent directories.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace stochroute

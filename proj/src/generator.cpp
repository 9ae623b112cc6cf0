#include "stochroute/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochroute {

namespace {
inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t s = seed;
  for (auto& word : s_) word = splitmix64(s);
}

uint64_t Rng::next_u64() {  // xoshiro256++
  uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale < 0.0) throw std::invalid_argument("gamma parameters");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return scale * d * v;
  }
}

double Rng::beta(double alpha, double b) {
  double x = gamma(alpha, 1.0);
  double y = gamma(b, 1.0);
  return x / (x + y);
}

Instance generate_instance(const GeneratorConfig& config) {
  if (config.n_pois < 1) throw std::invalid_argument("n_pois must be >= 1");
  if (config.n_refuel < 0) throw std::invalid_argument("n_refuel must be >= 0");
  if (config.n_vehicles < 1) throw std::invalid_argument("n_vehicles must be >= 1");
  if (!(config.grid_size > 0.0)) throw std::invalid_argument("grid_size must be positive");
  if (!(config.capacity_multiplier > 0.0))
    throw std::invalid_argument("capacity_multiplier must be positive");

  Rng rng(config.seed);
  const double g = config.grid_size;

  // depot at the grid center, refueling sites at the quarter points; extra
  // sites beyond four drawn uniformly
  std::vector<Point> coords;
  coords.push_back({0.5 * g, 0.5 * g});
  const Point quarter[4] = {{0.25 * g, 0.25 * g},
                            {0.25 * g, 0.75 * g},
                            {0.75 * g, 0.25 * g},
                            {0.75 * g, 0.75 * g}};
  for (int r = 0; r < config.n_refuel; ++r) {
    if (r < 4)
      coords.push_back(quarter[r]);
    else
      coords.push_back({rng.uniform(0.0, g), rng.uniform(0.0, g)});
  }
  for (int p = 0; p < config.n_pois; ++p)
    coords.push_back({rng.uniform(0.0, g), rng.uniform(0.0, g)});

  std::vector<std::string> refuel_ids, poi_ids, vehicle_ids;
  for (int r = 0; r < config.n_refuel; ++r) refuel_ids.push_back("d" + std::to_string(r + 1));
  for (int p = 0; p < config.n_pois; ++p) poi_ids.push_back("t" + std::to_string(p + 1));
  for (int m = 0; m < config.n_vehicles; ++m) vehicle_ids.push_back("v" + std::to_string(m + 1));

  // lambda: max distance from the home depot to any POI
  double lambda = 0.0;
  for (int p = 0; p < config.n_pois; ++p) {
    const Point& pt = coords[1 + config.n_refuel + p];
    lambda = std::max(lambda, std::hypot(pt.x - coords[0].x, pt.y - coords[0].y));
  }

  std::vector<double> caps(config.n_vehicles);
  for (int m = 0; m < config.n_vehicles; ++m) {
    double mult = config.capacity_multiplier;
    if (m < static_cast<int>(config.vehicle_multipliers.size()))
      mult = config.vehicle_multipliers[m];
    caps[m] = mult * lambda;
  }

  Instance inst = Instance::create("d0", refuel_ids, poi_ids, vehicle_ids, caps);
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();

  std::vector<double> cost(V * V, 0.0);
  std::vector<std::vector<double>> fuel(M, std::vector<double>(V * V, 0.0));
  for (int i = 0; i < V; ++i)
    for (int k = 0; k < V; ++k) {
      if (i == k) continue;
      double d = std::hypot(coords[i].x - coords[k].x, coords[i].y - coords[k].y);
      cost[inst.arc(i, k)] = std::floor(d);
      for (int m = 0; m < M; ++m) {
        double economy = 1.0;
        if (m < static_cast<int>(config.fuel_economy.size())) economy = config.fuel_economy[m];
        fuel[m][inst.arc(i, k)] = std::floor(d * economy);
      }
    }
  inst.set_coordinates(std::move(coords));
  inst.set_travel_cost(std::move(cost));
  inst.set_nominal_fuel(std::move(fuel));

  if (config.with_profits) {
    std::vector<std::vector<double>> profit(M, std::vector<double>(config.n_pois, 0.0));
    for (int p = 0; p < config.n_pois; ++p)
      for (int m = 0; m < M; ++m)
        profit[m][p] = std::floor(rng.uniform(config.profit_min, config.profit_max + 1.0));
    inst.set_profit(std::move(profit));
  }
  return inst;
}

ScenarioSet sample_fuel_scenarios(const Instance& inst, const ScenarioConfig& config) {
  if (config.fuel_model == ScenarioConfig::FuelModel::none)
    throw std::invalid_argument("fuel model must be gamma or beta");
  if (config.n_scenarios < 1) throw std::invalid_argument("n_scenarios must be >= 1");
  if (config.fuel_model == ScenarioConfig::FuelModel::gamma && !(config.gamma_shape > 0.0))
    throw std::invalid_argument("gamma_shape must be positive");
  if (config.fuel_model == ScenarioConfig::FuelModel::beta &&
      (!(config.beta_alpha > 0.0) || !(config.beta_beta > 0.0) || config.spread < 0.0))
    throw std::invalid_argument("beta parameters must be positive, spread nonnegative");

  Rng rng(config.seed);
  const int V = inst.num_vertices();
  const int M = inst.num_vehicles();
  ScenarioSet set;
  for (int s = 0; s < config.n_scenarios; ++s) {
    Scenario sc;
    sc.probability = 1.0 / config.n_scenarios;
    sc.availability.assign(M, 1);
    sc.fuel.assign(M, std::vector<double>(V * V, 0.0));
    for (int m = 0; m < M; ++m)
      for (int i = 0; i < V; ++i)
        for (int k = 0; k < V; ++k) {
          if (!inst.arc_exists(i, k)) continue;
          double nominal = inst.nominal_fuel(i, k, m);
          double value = 0.0;
          if (config.fuel_model == ScenarioConfig::FuelModel::gamma) {
            value = nominal == 0.0
                        ? 0.0  // degenerate mean preserved
                        : rng.gamma(config.gamma_shape, nominal / config.gamma_shape);
          } else {
            double b = rng.beta(config.beta_alpha, config.beta_beta);
            value = nominal * (1.0 - config.spread) + nominal * 2.0 * config.spread * b;
          }
          sc.fuel[m][inst.arc(i, k)] = value;
        }
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

ScenarioSet sample_availability_scenarios(const Instance& inst,
                                          const ScenarioConfig& config) {
  const int M = inst.num_vehicles();
  if (static_cast<int>(config.availability_probability.size()) != M)
    throw std::invalid_argument("availability_probability must cover every vehicle");
  if (M > 10) throw std::invalid_argument("availability enumeration supports up to 10 vehicles");
  for (double p : config.availability_probability)
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("availability probability outside [0,1]");

  ScenarioSet set;
  // enumerate all-available pattern first: bit m clear = available
  for (uint32_t pattern = 0; pattern < (1u << M); ++pattern) {
    double prob = 1.0;
    Scenario sc;
    sc.availability.assign(M, 1);
    for (int m = 0; m < M; ++m) {
      double p = config.availability_probability[m];
      if (pattern & (1u << m)) {
        sc.availability[m] = 0;
        prob *= 1.0 - p;
      } else {
        prob *= p;
      }
    }
    if (prob <= 0.0) continue;  // zero-probability atoms dropped
    sc.probability = prob;
    for (int m = 0; m < M; ++m) sc.fuel.push_back(inst.nominal_fuel_matrix(m));
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

}  // namespace stochroute

#include "stochroute/route_dp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <limits>
#include <unordered_map>

namespace stochroute {

namespace {
constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

RouteDp::RouteDp(const Instance& inst, int vehicle, std::vector<double> price,
                 std::vector<double> burn)
    : inst_(&inst),
      vehicle_(vehicle),
      n_(inst.num_pois()),
      cap_(inst.fuel_capacity(vehicle)),
      price_(std::move(price)),
      burn_(std::move(burn)) {
  if (n_ > 40) throw std::invalid_argument("route dp supports up to 40 POIs");
  build_hops();
}

void RouteDp::build_hops() {
  auto vertex_of = [&](int h) { return h == 0 ? inst_->home_depot() : inst_->poi_vertex(h - 1); };
  auto arc_ok = [&](int i, int j) { return i != j && inst_->arc_exists(i, j); };

  hops_.assign(n_ + 1, std::vector<std::vector<Hop>>(n_ + 1));
  for (int a = 0; a <= n_; ++a)
    for (int b = 0; b <= n_; ++b) {
      if (a == b && a != 0) continue;  // only d0 -> d0 (bounce) may share ends
      int u = vertex_of(a), w = vertex_of(b);
      std::vector<Hop> opts;
      if (a != b && arc_ok(u, w)) {
        Hop h;
        h.pre = burn_[inst_->arc(u, w)];
        h.post = -1.0;
        h.cost = price_[inst_->arc(u, w)];
        if (h.pre <= cap_ + kTol) opts.push_back(h);
      }
      for (int d = 1; d < inst_->num_depots(); ++d) {
        if (d == u || d == w) continue;
        if (!arc_ok(u, d) || !arc_ok(d, w)) continue;
        double pre = burn_[inst_->arc(u, d)];
        double post = burn_[inst_->arc(d, w)];
        if (pre > cap_ + kTol || post > cap_ + kTol) continue;
        Hop h;
        h.pre = pre;
        h.post = post;
        h.cost = price_[inst_->arc(u, d)] + price_[inst_->arc(d, w)];
        h.stops[0] = d;
        h.n_stops = 1;
        opts.push_back(h);
        for (int d2 = 1; d2 < inst_->num_depots(); ++d2) {
          if (d2 == d || d2 == u || d2 == w) continue;
          if (!arc_ok(d, d2) || !arc_ok(d2, w)) continue;
          double mid = burn_[inst_->arc(d, d2)];
          double post2 = burn_[inst_->arc(d2, w)];
          if (mid > cap_ + kTol || post2 > cap_ + kTol) continue;
          Hop h2;
          h2.pre = pre;
          h2.post = post2;
          h2.cost = price_[inst_->arc(u, d)] + price_[inst_->arc(d, d2)] +
                    price_[inst_->arc(d2, w)];
          h2.stops[0] = d;
          h2.stops[1] = d2;
          h2.n_stops = 2;
          opts.push_back(h2);
        }
      }
      // prune dominated options (cost, pre, post all no better)
      std::vector<Hop> kept;
      for (size_t i = 0; i < opts.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < opts.size() && !dominated; ++j) {
          if (i == j) continue;
          const Hop &x = opts[i], &y = opts[j];
          if (x.post < 0 || y.post < 0) continue;  // direct hop kept as is
          bool better_eq =
              y.cost <= x.cost + kTol && y.pre <= x.pre + kTol && y.post <= x.post + kTol;
          bool strictly = y.cost < x.cost - kTol || y.pre < x.pre - kTol ||
                          y.post < x.post - kTol || j < i;
          dominated = better_eq && strictly;
        }
        if (!dominated) kept.push_back(opts[i]);
      }
      hops_[a][b] = std::move(kept);
    }
}

bool RouteDp::hop_applies(const Hop& h, double fuel_now, double* fuel_out) const {
  if (fuel_now + h.pre > cap_ + kTol) return false;
  *fuel_out = h.post < 0 ? fuel_now + h.pre : h.post;
  return true;
}

namespace {

// Pareto set on (cost, fuel): keep points not dominated in both coordinates.
struct LabelList {
  struct L {
    double cost, fuel;
  };
  std::vector<L> v;
  bool insert(double cost, double fuel) {
    for (const auto& l : v)
      if (l.cost <= cost + 1e-12 && l.fuel <= fuel + 1e-12) return false;
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](const L& l) { return cost <= l.cost && fuel <= l.fuel; }),
            v.end());
    v.push_back({cost, fuel});
    return true;
  }
};

}  // namespace

RouteDp::Result RouteDp::solve(uint64_t target_mask, bool want_route) const {
  if (target_mask != 0 && __builtin_popcountll(target_mask) > 18)
    throw std::invalid_argument("exact sweep capped at 18 POIs; use solve_best_first");

  Result out;
  // bounce route for the empty target
  if (target_mask == 0) {
    double best = kInf;
    const Hop* best_hop = nullptr;
    for (const auto& h : hops_[0][0]) {
      double f;
      if (hop_applies(h, 0.0, &f) && h.cost < best - kTol) {
        best = h.cost;
        best_hop = &h;
      }
    }
    if (!best_hop) return out;
    out.feasible = true;
    out.cost = best;
    if (want_route) {
      out.route.push_back(inst_->home_depot());
      for (int s = 0; s < best_hop->n_stops; ++s) out.route.push_back(best_hop->stops[s]);
      out.route.push_back(inst_->home_depot());
    }
    return out;
  }

  // submasks of target in popcount order
  std::vector<uint64_t> order;
  for (uint64_t sub = target_mask;; sub = (sub - 1) & target_mask) {
    if (sub) order.push_back(sub);
    if (sub == 0) break;
  }
  std::sort(order.begin(), order.end(), [](uint64_t a, uint64_t b) {
    int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::unordered_map<uint64_t, LabelList> labels;
  labels.reserve(order.size() * static_cast<size_t>(n_) / 2 + 16);
  auto key = [&](uint64_t mask, int last) { return mask * 64 + last; };

  // seeds: d0 -> first POI
  for (int p = 0; p < n_; ++p) {
    if (!(target_mask & (1ULL << p))) continue;
    for (const auto& h : hops_[0][hop_index(p)]) {
      double f;
      if (hop_applies(h, 0.0, &f)) labels[key(1ULL << p, p)].insert(h.cost, f);
    }
  }
  for (uint64_t mask : order) {
    for (int last = 0; last < n_; ++last) {
      if (!(mask & (1ULL << last))) continue;
      auto it = labels.find(key(mask, last));
      if (it == labels.end()) continue;
      auto snapshot = it->second.v;  // expanding may rehash the map
      for (const auto& lab : snapshot)
        for (int nxt = 0; nxt < n_; ++nxt) {
          if (mask & (1ULL << nxt) || !(target_mask & (1ULL << nxt))) continue;
          for (const auto& h : hops_[hop_index(last)][hop_index(nxt)]) {
            double f;
            if (hop_applies(h, lab.fuel, &f))
              labels[key(mask | (1ULL << nxt), nxt)].insert(lab.cost + h.cost, f);
          }
        }
    }
  }
  // close the walk at the target mask
  double best = kInf;
  int best_last = -1;
  double best_cost_before = 0, best_fuel_before = 0;
  const Hop* best_close = nullptr;
  for (int last = 0; last < n_; ++last) {
    if (!(target_mask & (1ULL << last))) continue;
    auto it = labels.find(key(target_mask, last));
    if (it == labels.end()) continue;
    for (const auto& lab : it->second.v)
      for (const auto& h : hops_[hop_index(last)][0]) {
        double f;
        if (!hop_applies(h, lab.fuel, &f)) continue;
        double total = lab.cost + h.cost;
        if (total < best - kTol) {
          best = total;
          best_last = last;
          best_cost_before = lab.cost;
          best_fuel_before = lab.fuel;
          best_close = &h;
        }
      }
  }
  if (best_last < 0) return out;
  out.feasible = true;
  out.cost = best;
  if (!want_route) return out;

  // backtrack by replaying transition arithmetic
  std::vector<int> rev;  // vertices after d0, reversed
  rev.push_back(inst_->home_depot());
  for (int s = best_close->n_stops - 1; s >= 0; --s) rev.push_back(best_close->stops[s]);
  uint64_t mask = target_mask;
  int last = best_last;
  double cost = best_cost_before, fuel = best_fuel_before;
  while (true) {
    rev.push_back(inst_->poi_vertex(last));
    uint64_t prev_mask = mask & ~(1ULL << last);
    bool found = false;
    if (prev_mask == 0) {
      for (const auto& h : hops_[0][hop_index(last)]) {
        double f;
        if (hop_applies(h, 0.0, &f) && std::fabs(h.cost - cost) < 1e-7 &&
            std::fabs(f - fuel) < 1e-7) {
          for (int s = h.n_stops - 1; s >= 0; --s) rev.push_back(h.stops[s]);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("route dp backtrack failed at seed");
      break;
    }
    for (int prev = 0; prev < n_ && !found; ++prev) {
      if (!(prev_mask & (1ULL << prev))) continue;
      auto it = labels.find(key(prev_mask, prev));
      if (it == labels.end()) continue;
      for (const auto& lab : it->second.v) {
        for (const auto& h : hops_[hop_index(prev)][hop_index(last)]) {
          double f;
          if (!hop_applies(h, lab.fuel, &f)) continue;
          if (std::fabs(lab.cost + h.cost - cost) < 1e-7 && std::fabs(f - fuel) < 1e-7) {
            for (int s = h.n_stops - 1; s >= 0; --s) rev.push_back(h.stops[s]);
            mask = prev_mask;
            last = prev;
            cost = lab.cost;
            fuel = lab.fuel;
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }
    if (!found) throw std::logic_error("route dp backtrack failed");
  }
  rev.push_back(inst_->home_depot());
  out.route.assign(rev.rbegin(), rev.rend());
  return out;
}

std::vector<double> RouteDp::all_mask_costs() const {
  if (n_ > 18) throw std::invalid_argument("all_mask_costs capped at 18 POIs");
  std::vector<double> best(1ULL << n_, kInf);
  {
    auto bounce = solve(0, false);
    if (bounce.feasible) best[0] = bounce.cost;
  }
  // one full sweep; close every mask on the way
  std::unordered_map<uint64_t, LabelList> labels;
  auto key = [&](uint64_t mask, int last) { return mask * 64 + last; };
  for (int p = 0; p < n_; ++p)
    for (const auto& h : hops_[0][hop_index(p)]) {
      double f;
      if (hop_applies(h, 0.0, &f)) labels[key(1ULL << p, p)].insert(h.cost, f);
    }
  std::vector<uint64_t> order(1ULL << n_);
  for (uint64_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [](uint64_t a, uint64_t b) {
    int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    return pa != pb ? pa < pb : a < b;
  });
  for (uint64_t mask : order) {
    if (!mask) continue;
    for (int last = 0; last < n_; ++last) {
      if (!(mask & (1ULL << last))) continue;
      auto it = labels.find(key(mask, last));
      if (it == labels.end()) continue;
      auto snapshot = it->second.v;
      for (const auto& lab : snapshot) {
        for (const auto& h : hops_[hop_index(last)][0]) {  // close
          double f;
          if (hop_applies(h, lab.fuel, &f))
            best[mask] = std::min(best[mask], lab.cost + h.cost);
        }
        for (int nxt = 0; nxt < n_; ++nxt) {
          if (mask & (1ULL << nxt)) continue;
          for (const auto& h : hops_[hop_index(last)][hop_index(nxt)]) {
            double f;
            if (hop_applies(h, lab.fuel, &f))
              labels[key(mask | (1ULL << nxt), nxt)].insert(lab.cost + h.cost, f);
          }
        }
      }
    }
  }
  return best;
}

RouteDp::Result RouteDp::solve_fixed_order(const std::vector<int>& poi_ordinals,
                                           bool want_route) const {
  Result out;
  if (poi_ordinals.empty()) return solve(0, want_route);
  const int len = static_cast<int>(poi_ordinals.size());
  // labels per position plus chosen-hop backpointers
  struct PL {
    double cost, fuel;
    int prev_label, hop;
  };
  std::vector<std::vector<PL>> pos(len + 1);
  auto insert = [&](int k, double cost, double fuel, int prev, int hop) {
    for (const auto& l : pos[k])
      if (l.cost <= cost + 1e-12 && l.fuel <= fuel + 1e-12) return;
    std::erase_if(pos[k], [&](const PL& l) { return cost <= l.cost && fuel <= l.fuel; });
    pos[k].push_back({cost, fuel, prev, hop});
  };
  {
    const auto& opts = hops_[0][hop_index(poi_ordinals[0])];
    for (size_t h = 0; h < opts.size(); ++h) {
      double f;
      if (hop_applies(opts[h], 0.0, &f)) insert(0, opts[h].cost, f, -1, static_cast<int>(h));
    }
  }
  for (int k = 0; k + 1 < len; ++k) {
    const auto& opts = hops_[hop_index(poi_ordinals[k])][hop_index(poi_ordinals[k + 1])];
    for (size_t li = 0; li < pos[k].size(); ++li)
      for (size_t h = 0; h < opts.size(); ++h) {
        double f;
        if (hop_applies(opts[h], pos[k][li].fuel, &f))
          insert(k + 1, pos[k][li].cost + opts[h].cost, f, static_cast<int>(li),
                 static_cast<int>(h));
      }
  }
  // close
  double best = kInf;
  int best_label = -1, best_hop = -1;
  const auto& close_opts = hops_[hop_index(poi_ordinals[len - 1])][0];
  for (size_t li = 0; li < pos[len - 1].size(); ++li)
    for (size_t h = 0; h < close_opts.size(); ++h) {
      double f;
      if (hop_applies(close_opts[h], pos[len - 1][li].fuel, &f) &&
          pos[len - 1][li].cost + close_opts[h].cost < best - kTol) {
        best = pos[len - 1][li].cost + close_opts[h].cost;
        best_label = static_cast<int>(li);
        best_hop = static_cast<int>(h);
      }
    }
  if (best_label < 0) return out;
  out.feasible = true;
  out.cost = best;
  if (!want_route) return out;

  std::vector<int> rev{inst_->home_depot()};
  for (int s = close_opts[best_hop].n_stops - 1; s >= 0; --s)
    rev.push_back(close_opts[best_hop].stops[s]);
  int li = best_label;
  for (int k = len - 1; k >= 0; --k) {
    rev.push_back(inst_->poi_vertex(poi_ordinals[k]));
    const auto& opts =
        k == 0 ? hops_[0][hop_index(poi_ordinals[0])]
               : hops_[hop_index(poi_ordinals[k - 1])][hop_index(poi_ordinals[k])];
    const PL& lab = pos[k][li];
    for (int s = opts[lab.hop].n_stops - 1; s >= 0; --s) rev.push_back(opts[lab.hop].stops[s]);
    li = lab.prev_label;
  }
  rev.push_back(inst_->home_depot());
  out.route.assign(rev.rbegin(), rev.rend());
  return out;
}

RouteDp::Result RouteDp::solve_best_first(uint64_t target_mask, int64_t label_cap) const {
  Result out;
  if (target_mask == 0) return solve(0, false);

  struct Entry {
    double cost, fuel;
    uint64_t mask;
    int last;
    bool operator>(const Entry& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (mask != o.mask) return mask > o.mask;
      if (last != o.last) return last > o.last;
      return fuel > o.fuel;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
  std::unordered_map<uint64_t, LabelList> labels;
  auto key = [&](uint64_t mask, int last) { return mask * 64 + last; };

  for (int p = 0; p < n_; ++p) {
    if (!(target_mask & (1ULL << p))) continue;
    for (const auto& h : hops_[0][hop_index(p)]) {
      double f;
      if (hop_applies(h, 0.0, &f) && labels[key(1ULL << p, p)].insert(h.cost, f))
        pq.push({h.cost, f, 1ULL << p, p});
    }
  }
  double best = kInf;
  int64_t pops = 0;
  while (!pq.empty()) {
    Entry e = pq.top();
    pq.pop();
    if (e.cost >= best) break;  // closing cost is nonnegative
    if (++pops > label_cap) {
      out.aborted = true;
      return out;
    }
    // stale check
    bool current = false;
    for (const auto& l : labels[key(e.mask, e.last)].v)
      if (std::fabs(l.cost - e.cost) < 1e-12 && std::fabs(l.fuel - e.fuel) < 1e-12) {
        current = true;
        break;
      }
    if (!current) continue;
    if (e.mask == target_mask) {
      for (const auto& h : hops_[hop_index(e.last)][0]) {
        double f;
        if (hop_applies(h, e.fuel, &f)) best = std::min(best, e.cost + h.cost);
      }
      continue;
    }
    for (int nxt = 0; nxt < n_; ++nxt) {
      if (e.mask & (1ULL << nxt) || !(target_mask & (1ULL << nxt))) continue;
      for (const auto& h : hops_[hop_index(e.last)][hop_index(nxt)]) {
        double f;
        if (hop_applies(h, e.fuel, &f)) {
          double c = e.cost + h.cost;
          if (c >= best) continue;
          if (labels[key(e.mask | (1ULL << nxt), nxt)].insert(c, f))
            pq.push({c, f, e.mask | (1ULL << nxt), nxt});
        }
      }
    }
  }
  if (best < kInf) {
    out.feasible = true;
    out.cost = best;
  }
  return out;
}

}  // namespace stochroute

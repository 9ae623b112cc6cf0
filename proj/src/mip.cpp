#include "stochroute/mip.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "stochroute/simplex.hpp"

namespace stochroute {

namespace {

struct Node {
  int parent = -1;
  int branch_var = -1;
  double blo = 0.0, bhi = 0.0;  // bound override for branch_var
  double bound = -kInf;         // internal-min LP value of the parent
};

struct QEntry {
  double bound;
  int id;
  // best bound first; ties resolved toward the newest node so tied
  // stretches become dives that keep the warm tableau useful
  bool operator>(const QEntry& other) const {
    if (bound != other.bound) return bound > other.bound;
    return id < other.id;
  }
};

double fractionality(double v) {
  double f = v - std::floor(v);
  return std::fabs(f - 0.5);  // smaller = more fractional
}

void check_violated(const LinearProgram::Row& row, const std::vector<double>& x) {
  double act = 0.0;
  for (const auto& [j, c] : row.coef) act += c * x[j];
  bool violated = false;
  switch (row.sense) {
    case LinearProgram::RowSense::le: violated = act > row.rhs + 1e-7; break;
    case LinearProgram::RowSense::ge: violated = act < row.rhs - 1e-7; break;
    case LinearProgram::RowSense::eq: violated = std::fabs(act - row.rhs) > 1e-7; break;
  }
  if (!violated) throw std::logic_error("lazy hook returned a row the point satisfies");
}

}  // namespace

LpSolution solve_mip(const LinearProgram& lp, const LazyHook& hook, const MipOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  const int n = lp.num_vars();
  const double flip = lp.sense == LinearProgram::Sense::maximize ? -1.0 : 1.0;

  std::vector<int> int_vars;
  for (int j = 0; j < n; ++j)
    if (lp.vars[j].integer) int_vars.push_back(j);

  SimplexTableau st(lp);

  std::vector<Node> nodes;
  nodes.push_back({});  // root
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> open;

  // bounds currently applied to the live tableau, and scratch target bounds
  std::vector<double> base_lo(n), base_hi(n);
  for (int j = 0; j < n; ++j) {
    base_lo[j] = lp.vars[j].lo;
    base_hi[j] = lp.vars[j].hi;
  }
  std::vector<double> cur_lo = base_lo, cur_hi = base_hi;
  std::vector<double> tgt_lo(n), tgt_hi(n);

  LpSolution out;
  out.status = LpSolution::Status::infeasible;
  double inc_int = kInf;  // incumbent objective, internal min space
  std::vector<double> inc_x;
  double global_lb = -kInf;
  int64_t node_count = 0;
  bool limit_hit = false;

  // caller-supplied warm incumbent: accepted when it satisfies every row
  // and integrality (hook rows from earlier runs must be re-included by the
  // caller in lp.rows)
  if (!opts.warm_start.empty() && opts.warm_start.size() == static_cast<size_t>(n)) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      double v = opts.warm_start[j];
      ok = v >= lp.vars[j].lo - 1e-7 && v <= lp.vars[j].hi + 1e-7 &&
           (!lp.vars[j].integer || std::fabs(v - std::round(v)) <= 1e-7);
    }
    for (int r = 0; r < lp.num_rows() && ok; ++r) {
      double act = 0.0;
      for (const auto& [j, c] : lp.rows[r].coef) act += c * opts.warm_start[j];
      switch (lp.rows[r].sense) {
        case LinearProgram::RowSense::le: ok = act <= lp.rows[r].rhs + 1e-7; break;
        case LinearProgram::RowSense::ge: ok = act >= lp.rows[r].rhs - 1e-7; break;
        case LinearProgram::RowSense::eq: ok = std::fabs(act - lp.rows[r].rhs) <= 1e-7; break;
      }
    }
    if (ok) {
      inc_x = opts.warm_start;
      for (int j = 0; j < n; ++j)
        if (lp.vars[j].integer) inc_x[j] = std::round(inc_x[j]);
      inc_int = 0.0;
      for (int j = 0; j < n; ++j) inc_int += flip * lp.vars[j].obj * inc_x[j];
    }
  }

  auto apply_node_bounds = [&](int id) {
    tgt_lo = base_lo;
    tgt_hi = base_hi;
    // collect overrides leaf -> root, intersecting
    for (int cur = id; cur > 0; cur = nodes[cur].parent) {
      const Node& nd = nodes[cur];
      tgt_lo[nd.branch_var] = std::max(tgt_lo[nd.branch_var], nd.blo);
      tgt_hi[nd.branch_var] = std::min(tgt_hi[nd.branch_var], nd.bhi);
    }
    for (int j = 0; j < n; ++j)
      if (tgt_lo[j] != cur_lo[j] || tgt_hi[j] != cur_hi[j]) {
        st.set_bound(j, tgt_lo[j], tgt_hi[j]);
        cur_lo[j] = tgt_lo[j];
        cur_hi[j] = tgt_hi[j];
      }
  };

  auto user_objective = [&](const std::vector<double>& x) {
    double o = 0.0;
    for (int j = 0; j < n; ++j) o += lp.vars[j].obj * x[j];
    return o;
  };

  auto finalize = [&](bool proven) {
    if (!inc_x.empty()) {
      out.status = proven ? LpSolution::Status::optimal : LpSolution::Status::feasible;
      out.x = inc_x;
      out.objective = user_objective(inc_x);
      double lb = proven ? inc_int : global_lb;
      out.best_bound = flip * lb;
      out.gap = proven ? 0.0 : (inc_int - lb) / std::max(1.0, std::fabs(inc_int));
    } else {
      out.status = limit_hit ? LpSolution::Status::time_limit : LpSolution::Status::infeasible;
      out.best_bound = flip * global_lb;
      out.gap = kInf;
    }
    out.nodes = node_count;
    out.hit_time_limit = limit_hit;
    return out;
  };

  open.push({-kInf, 0});
  while (!open.empty()) {
    if (elapsed() > opts.time_limit_s || node_count >= opts.node_limit) {
      limit_hit = true;
      global_lb = std::max(global_lb, open.top().bound);
      return finalize(false);
    }
    QEntry top = open.top();
    open.pop();
    // best-bound order: the popped bound is the global lower bound
    global_lb = std::max(global_lb, top.bound);
    if (top.bound >= inc_int - 1e-9) break;  // all remaining nodes are worse
    if (!inc_x.empty()) {
      double gap = (inc_int - top.bound) / std::max(1.0, std::fabs(inc_int));
      if (gap <= opts.gap_tol) return finalize(opts.gap_tol <= 1e-9);
    }
    ++node_count;

    apply_node_bounds(top.id);
    auto res = st.resolve();
    if (res == SimplexTableau::Result::infeasible) continue;
    if (res == SimplexTableau::Result::unbounded) {
      out.status = LpSolution::Status::unbounded;
      out.nodes = node_count;
      return out;
    }
    if (res == SimplexTableau::Result::iteration_limit) {
      out.status = LpSolution::Status::iteration_limit;
      out.nodes = node_count;
      return out;
    }

    // hook loop: an integral point may trigger rows and a re-solve
    for (;;) {
      double value = st.objective_internal();
      if (value >= inc_int - 1e-9) break;  // dominated

      std::vector<double> x = st.structural_values();
      int frac_var = -1;
      for (int pass = 0; pass < 2 && frac_var < 0; ++pass) {
        double best_dist = 0.5 - opts.int_tol;
        for (int j : int_vars) {
          if (!opts.branch_priority.empty()) {
            bool priority = opts.branch_priority[j] != 0;
            if (pass == 0 && !priority) continue;
            if (pass == 1 && priority) continue;
          } else if (pass == 1) {
            break;
          }
          double d = fractionality(x[j]);
          double away = std::fabs(x[j] - std::round(x[j]));
          if (away <= opts.int_tol) continue;
          if (d < best_dist - 1e-12) {
            best_dist = d;
            frac_var = j;
          }
        }
      }

      if (frac_var < 0) {
        if (hook) {
          auto rows = hook(x);
          if (!rows.empty()) {
            for (const auto& row : rows) {
              check_violated(row, x);
              st.add_row(row);
            }
            auto r2 = st.resolve();
            if (r2 == SimplexTableau::Result::infeasible) break;
            if (r2 != SimplexTableau::Result::optimal) {
              out.status = LpSolution::Status::iteration_limit;
              out.nodes = node_count;
              return out;
            }
            continue;  // re-examine the repaired point
          }
        }
        // accept incumbent (round integer values exactly)
        for (int j : int_vars) x[j] = std::round(x[j]);
        inc_int = value;
        inc_x = std::move(x);
        break;
      }

      // branch
      double v = x[frac_var];
      double lo = cur_lo[frac_var], hi = cur_hi[frac_var];
      int down = static_cast<int>(nodes.size());
      nodes.push_back({top.id, frac_var, lo, std::floor(v), value});
      open.push({value, down});
      int up = static_cast<int>(nodes.size());
      nodes.push_back({top.id, frac_var, std::ceil(v), hi, value});
      open.push({value, up});
      break;
    }
  }

  if (inc_x.empty()) return finalize(false);
  global_lb = inc_int;
  return finalize(true);
}

}  // namespace stochroute

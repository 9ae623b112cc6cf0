#include "stochroute/lp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "stochroute/simplex.hpp"

namespace stochroute {

LpSolution solve_lp(const LinearProgram& lp) {
  for (const auto& v : lp.vars)
    if (v.integer)
      throw std::invalid_argument("solve_lp called with integrality flags; use solve_mip");

  SimplexTableau st(lp);
  auto res = st.solve();
  LpSolution out;
  switch (res) {
    case SimplexTableau::Result::infeasible:
      out.status = LpSolution::Status::infeasible;
      return out;
    case SimplexTableau::Result::unbounded:
      out.status = LpSolution::Status::unbounded;
      return out;
    case SimplexTableau::Result::iteration_limit:
      out.status = LpSolution::Status::iteration_limit;
      return out;
    case SimplexTableau::Result::optimal:
      break;
  }
  if (!st.polish()) {
    // numerical drift: one cold retry, then accept the tableau state
    st.solve();
    st.polish();
  }
  out.status = LpSolution::Status::optimal;
  out.x = st.structural_values();
  const double flip = lp.sense == LinearProgram::Sense::maximize ? -1.0 : 1.0;
  double obj = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) obj += lp.vars[j].obj * out.x[j];
  out.objective = obj;
  out.duals.resize(lp.num_rows());
  const auto& y = st.duals_internal();
  for (int r = 0; r < lp.num_rows(); ++r) out.duals[r] = flip * y[r];
  out.reduced_costs.resize(lp.num_vars());
  const auto& dj = st.reduced_costs_internal();
  for (int j = 0; j < lp.num_vars(); ++j) out.reduced_costs[j] = flip * dj[j];
  return out;
}

namespace {

std::string num12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string var_name(const LinearProgram& lp, int j) {
  if (!lp.vars[j].name.empty()) return lp.vars[j].name;
  return "x" + std::to_string(j);
}

void append_linear(std::ostringstream& os, const LinearProgram& lp,
                   const std::vector<std::pair<int, double>>& coef) {
  bool first = true;
  for (const auto& [j, c] : coef) {
    if (c == 0.0) continue;
    if (first) {
      if (c < 0) os << "- ";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    os << num12(std::fabs(c)) << " " << var_name(lp, j);
  }
  if (first) os << "0 " << var_name(lp, 0);
}

}  // namespace

std::string write_lp_format(const LinearProgram& lp, const std::string& name) {
  std::ostringstream os;
  os << "\\ " << name << "\n";
  os << (lp.sense == LinearProgram::Sense::maximize ? "Maximize" : "Minimize") << "\n obj:";
  {
    std::vector<std::pair<int, double>> objcoef;
    for (int j = 0; j < lp.num_vars(); ++j)
      if (lp.vars[j].obj != 0.0) objcoef.emplace_back(j, lp.vars[j].obj);
    os << " ";
    append_linear(os, lp, objcoef);
  }
  os << "\nSubject To\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.rows[r];
    os << " " << (row.name.empty() ? "c" + std::to_string(r) : row.name) << ": ";
    append_linear(os, lp, row.coef);
    switch (row.sense) {
      case LinearProgram::RowSense::le: os << " <= "; break;
      case LinearProgram::RowSense::eq: os << " = "; break;
      case LinearProgram::RowSense::ge: os << " >= "; break;
    }
    os << num12(row.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const auto& v = lp.vars[j];
    if (v.lo == 0.0 && v.hi == kInf) continue;
    os << " ";
    if (v.lo == v.hi) {
      os << var_name(lp, j) << " = " << num12(v.lo);
    } else {
      if (std::isfinite(v.lo))
        os << num12(v.lo) << " <= ";
      else
        os << "-inf <= ";
      os << var_name(lp, j);
      if (std::isfinite(v.hi)) os << " <= " << num12(v.hi);
    }
    os << "\n";
  }
  bool any_int = false;
  for (const auto& v : lp.vars) any_int |= v.integer;
  if (any_int) {
    os << "Generals\n";
    for (int j = 0; j < lp.num_vars(); ++j)
      if (lp.vars[j].integer) os << " " << var_name(lp, j) << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace stochroute

#pragma once

#include <string>
#include <vector>

namespace stochroute {

// Minimal dependency-free SVG bar charts for the evaluation reports.
std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars,
                          const std::string& value_label = "");

// One group per case, one bar per series (e.g. per-vehicle profit per
// availability case).
std::string svg_grouped_bars(const std::string& title,
                             const std::vector<std::string>& groups,
                             const std::vector<std::string>& series,
                             const std::vector<std::vector<double>>& values);

}  // namespace stochroute

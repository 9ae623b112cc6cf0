#include "stochroute/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace stochroute {

namespace {

const char* kPalette[] = {"#4878a8", "#e49444", "#5a9e6f", "#b65d60", "#857aab", "#8c8c8c"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars,
                          const std::string& value_label) {
  const double W = 640, H = 360, ml = 60, mr = 20, mt = 40, mb = 60;
  double vmax = 1e-9, vmin = 0.0;
  for (const auto& [_, v] : bars) {
    vmax = std::max(vmax, v);
    vmin = std::min(vmin, v);
  }
  double span = vmax - vmin;
  if (span <= 0) span = 1.0;
  double plot_w = W - ml - mr, plot_h = H - mt - mb;
  double bw = plot_w / std::max<size_t>(1, bars.size());
  auto ypos = [&](double v) { return mt + plot_h * (1.0 - (v - vmin) / span); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << ypos(0.0) << "\" x2=\"" << W - mr << "\" y2=\""
     << ypos(0.0) << "\" stroke=\"#333\"/>\n";
  for (size_t i = 0; i < bars.size(); ++i) {
    double v = bars[i].second;
    double y0 = ypos(std::max(0.0, v)), y1 = ypos(std::min(0.0, v));
    os << "<rect x=\"" << ml + i * bw + bw * 0.15 << "\" y=\"" << y0 << "\" width=\""
       << bw * 0.7 << "\" height=\"" << std::max(0.5, y1 - y0)
       << "\" fill=\"" << kPalette[0] << "\"/>\n";
    os << "<text x=\"" << ml + (i + 0.5) * bw << "\" y=\"" << H - mb + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << bars[i].first << "</text>\n";
    os << "<text x=\"" << ml + (i + 0.5) * bw << "\" y=\"" << y0 - 4
       << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(v) << "</text>\n";
  }
  if (!value_label.empty())
    os << "<text x=\"16\" y=\"" << mt + plot_h / 2
       << "\" font-size=\"12\" transform=\"rotate(-90 16," << mt + plot_h / 2 << ")\">"
       << value_label << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string svg_grouped_bars(const std::string& title,
                             const std::vector<std::string>& groups,
                             const std::vector<std::string>& series,
                             const std::vector<std::vector<double>>& values) {
  const double W = 720, H = 400, ml = 60, mr = 140, mt = 40, mb = 60;
  double vmax = 1e-9;
  for (const auto& g : values)
    for (double v : g) vmax = std::max(vmax, v);
  double plot_w = W - ml - mr, plot_h = H - mt - mb;
  double gw = plot_w / std::max<size_t>(1, groups.size());
  double bw = gw / std::max<size_t>(1, series.size() + 1);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<text x=\"" << (ml + plot_w / 2) << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << W - mr << "\" y2=\""
     << mt + plot_h << "\" stroke=\"#333\"/>\n";
  for (size_t g = 0; g < groups.size(); ++g) {
    for (size_t s = 0; s < series.size() && g < values.size(); ++s) {
      double v = s < values[g].size() ? values[g][s] : 0.0;
      double h = plot_h * v / vmax;
      os << "<rect x=\"" << ml + g * gw + (s + 0.5) * bw << "\" y=\"" << mt + plot_h - h
         << "\" width=\"" << bw * 0.85 << "\" height=\"" << std::max(0.5, h) << "\" fill=\""
         << kPalette[s % 6] << "\"/>\n";
    }
    os << "<text x=\"" << ml + (g + 0.5) * gw << "\" y=\"" << H - mb + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << groups[g] << "</text>\n";
  }
  for (size_t s = 0; s < series.size(); ++s) {
    os << "<rect x=\"" << W - mr + 10 << "\" y=\"" << mt + 18 * s << "\" width=\"12\" "
       << "height=\"12\" fill=\"" << kPalette[s % 6] << "\"/>\n";
    os << "<text x=\"" << W - mr + 27 << "\" y=\"" << mt + 18 * s + 10
       << "\" font-size=\"11\">" << series[s] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stochroute

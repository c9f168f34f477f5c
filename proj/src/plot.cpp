#include "gcnn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gcnn/errors.hpp"

namespace gcnn {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string svg_plot(const std::string& title, const std::vector<PlotSeries>& series, int width,
                     int height) {
  if (series.empty()) throw std::invalid_argument("svg_plot: no series");
  double xmin = series[0].x.minCoeff(), xmax = series[0].x.maxCoeff();
  double ymin = series[0].y.minCoeff(), ymax = series[0].y.maxCoeff();
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.size() < 2)
      throw std::invalid_argument("svg_plot: series needs matching x/y with >= 2 points");
    xmin = std::min(xmin, s.x.minCoeff());
    xmax = std::max(xmax, s.x.maxCoeff());
    ymin = std::min(ymin, s.y.minCoeff());
    ymax = std::max(ymax, s.y.maxCoeff());
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const int ml = 60, mr = 15, mt = 30, mb = 40;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";
  svg += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) + "\" width=\"" +
         fmt(pw) + "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#888\"/>\n";

  // axis extent labels
  svg += "<text x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(height - 20) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(xmin) + "</text>\n";
  svg += "<text x=\"" + std::to_string(width - mr) + "\" y=\"" + std::to_string(height - 20) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(xmax) +
         "</text>\n";
  svg += "<text x=\"" + std::to_string(ml - 5) + "\" y=\"" + std::to_string(mt + 10) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(ymax) +
         "</text>\n";
  svg += "<text x=\"" + std::to_string(ml - 5) + "\" y=\"" + std::to_string(mt + (int)ph) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(ymin) +
         "</text>\n";

  int legend_y = mt + 15;
  for (const auto& s : series) {
    std::string pts;
    for (Eigen::Index i = 0; i < s.x.size(); ++i)
      pts += fmt(px(s.x(i))) + "," + fmt(py(s.y(i))) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    svg += "<text x=\"" + std::to_string(ml + 10) + "\" y=\"" + std::to_string(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + s.color + "\">" + s.label +
           "</text>\n";
    legend_y += 14;
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open plot file for writing: " + path);
  out << svg_plot(title, series);
}

}  // namespace gcnn

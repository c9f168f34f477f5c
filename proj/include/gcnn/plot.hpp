#pragma once

#include <string>
#include <vector>

#include "gcnn/types.hpp"

namespace gcnn {

struct PlotSeries {
  std::string label;
  Vec x;
  Vec y;
  std::string color = "#1f77b4";
};

/// Minimal SVG line plot: one polyline per series, a frame, axis extents, and
/// a legend. Good enough for eyeballing boundary traces.
std::string svg_plot(const std::string& title, const std::vector<PlotSeries>& series,
                     int width = 720, int height = 480);

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series);

}  // namespace gcnn

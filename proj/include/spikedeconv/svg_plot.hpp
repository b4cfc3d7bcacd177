#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spikedeconv {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

// Minimal static line plot. Non-finite points (and nonpositive ones on a log
// axis) are skipped.
void write_svg_plot(std::ostream& os, const PlotSpec& spec);

}  // namespace spikedeconv

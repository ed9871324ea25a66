#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hrg {

// Minimal deterministic line/point chart, enough for distribution overlays
// and metric-vs-fraction plots.
struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::vector<double> y_errors;  // optional, same length as points
  std::string color;             // defaults assigned per index when empty
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
  std::optional<double> y_min;
  std::optional<double> y_max;
};

std::string render_chart_svg(const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace hrg

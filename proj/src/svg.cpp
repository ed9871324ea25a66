#include "hrg/svg.hpp"

#include <algorithm>
#include <cmath>

#include "hrg/util.hpp"

namespace hrg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) { return format_fixed(v, 2); }

// Round step to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
  if (span <= 0.0) return 1.0;
  double raw = span / target_ticks;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_chart_svg(const ChartSpec& spec, const std::vector<Series>& series) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      double err = p < s.y_errors.size() ? s.y_errors[p] : 0.0;
      if (!any) {
        x_min = x_max = s.points[p].first;
        y_min = s.points[p].second - err;
        y_max = s.points[p].second + err;
        any = true;
      } else {
        x_min = std::min(x_min, s.points[p].first);
        x_max = std::max(x_max, s.points[p].first);
        y_min = std::min(y_min, s.points[p].second - err);
        y_max = std::max(y_max, s.points[p].second + err);
      }
    }
  }
  if (spec.y_min) y_min = *spec.y_min;
  if (spec.y_max) y_max = *spec.y_max;
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double ml = 70, mr = 150, mt = 40, mb = 55;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + escape_xml(spec.title) + "</text>\n";

  // Axes and ticks.
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(ml + pw) +
         "\" y2=\"" + num(mt + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(mt + ph) + "\" stroke=\"black\"/>\n";
  double xs = nice_step(x_max - x_min, 6);
  for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-9; t += xs) {
    svg += "<line x1=\"" + num(sx(t)) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(sx(t)) +
           "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(sx(t)) + "\" y=\"" + num(mt + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(std::round(t * 1e6) / 1e6) + "</text>\n";
  }
  double ys = nice_step(y_max - y_min, 6);
  for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-9; t += ys) {
    svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(sy(t)) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(sy(t)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(sy(t) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(std::round(t * 1e6) / 1e6) + "</text>\n";
  }
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(spec.height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape_xml(spec.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + num(mt + ph / 2) + ")\">" +
         escape_xml(spec.y_label) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string color = s.color.empty() ? kPalette[si % 7] : s.color;
    std::string path;
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      path += (p == 0 ? "M" : " L");
      path += num(sx(s.points[p].first)) + " " + num(sy(s.points[p].second));
    }
    if (s.points.size() > 1)
      svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t p = 0; p < s.points.size(); ++p) {
      double x = sx(s.points[p].first), y = sy(s.points[p].second);
      if (p < s.y_errors.size() && s.y_errors[p] > 0.0) {
        double lo = sy(s.points[p].second - s.y_errors[p]);
        double hi = sy(s.points[p].second + s.y_errors[p]);
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(lo) + "\" x2=\"" + num(x) +
               "\" y2=\"" + num(hi) + "\" stroke=\"" + color + "\"/>\n";
      }
      svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    }
    double ly = mt + 16 + 18.0 * static_cast<double>(si);
    svg += "<line x1=\"" + num(ml + pw + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(ml + pw + 30) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(ml + pw + 35) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(s.label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hrg

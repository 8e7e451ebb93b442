#pragma once

#include <string>
#include <vector>

namespace orlhom {

// Minimal native line-plot writer; no external plotting dependency.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

std::string render_line_plot(const SvgPlotSpec& spec, const std::vector<SvgSeries>& series);
void write_line_plot(const std::string& path, const SvgPlotSpec& spec,
                     const std::vector<SvgSeries>& series);

}  // namespace orlhom

#include "orlhom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orlhom {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double transform(double v, bool log_scale) { return log_scale ? std::log10(v) : v; }

}  // namespace

std::string render_line_plot(const SvgPlotSpec& spec, const std::vector<SvgSeries>& series) {
  // Log plots clamp at 1e-16 so exact zeros do not blow out the axis.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const SvgSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = transform(s.x[i], spec.log_x);
      const double y = transform(std::max(s.y[i], spec.log_y ? 1e-16 : s.y[i]), spec.log_y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + (transform(x, spec.log_x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) {
    const double t = transform(spec.log_y ? std::max(y, 1e-16) : y, spec.log_y);
    return mt + ph - (t - ymin) / (ymax - ymin) * ph;
  };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << spec.title << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // Axis ticks: four per axis in the transformed scale.
  for (int i = 0; i <= 4; ++i) {
    const double tx = xmin + (xmax - xmin) * i / 4.0;
    const double ty = ymin + (ymax - ymin) * i / 4.0;
    const double gx = ml + pw * i / 4.0;
    const double gy = mt + ph - ph * i / 4.0;
    const double lx = spec.log_x ? std::pow(10.0, tx) : tx;
    const double ly = spec.log_y ? std::pow(10.0, ty) : ty;
    os << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << gx << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << lx << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml << "\" y2=\"" << gy
       << "\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << ly << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 10
     << "\" text-anchor=\"middle\" font-size=\"12\">" << spec.x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << mt + ph / 2
     << ")\">" << spec.y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const SvgSeries& s = series[si];
    const char* color = kPalette[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
         << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    os << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16 + 14 * static_cast<double>(si)
       << "\" font-size=\"11\" fill=\"" << color << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_line_plot(const std::string& path, const SvgPlotSpec& spec,
                     const std::vector<SvgSeries>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_line_plot: cannot write " + path);
  out << render_line_plot(spec, series);
}

}  // namespace orlhom

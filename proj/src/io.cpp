#include "qtherm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qtherm {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
  return buf;
}

nlohmann::ordered_json json_number(double value) {
  if (!std::isfinite(value)) return format_number(value);
  return std::stod(format_number(value));
}

std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

std::string svg_line_chart(const std::string& title, const std::vector<SvgSeries>& series) {
  constexpr double kWidth = 640.0, kPanel = 200.0, kMargin = 50.0;
  const double height = kMargin + series.size() * (kPanel + kMargin);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const double top = kMargin + k * (kPanel + kMargin);
    const double left = kMargin, right = kWidth - 20.0;
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
        << "\" height=\"" << kPanel << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"" << top - 6 << "\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << s.label << "</text>\n";
    if (s.x.empty() || s.x.size() != s.y.size()) continue;
    const auto [xmin, xmax] = std::minmax_element(s.x.begin(), s.x.end());
    const auto [ymin, ymax] = std::minmax_element(s.y.begin(), s.y.end());
    const double xspan = *xmax > *xmin ? *xmax - *xmin : 1.0;
    const double yspan = *ymax > *ymin ? *ymax - *ymin : 1.0;
    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double px = left + (s.x[i] - *xmin) / xspan * (right - left);
      const double py = top + kPanel - (s.y[i] - *ymin) / yspan * kPanel;
      svg << format_number(px) << ',' << format_number(py) << (i + 1 < s.x.size() ? " " : "");
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << left + 4 << "\" y=\"" << top + 14 << "\" font-family=\"sans-serif\" "
        << "font-size=\"10\">max " << format_number(*ymax) << "</text>\n";
    svg << "<text x=\"" << left + 4 << "\" y=\"" << top + kPanel - 4
        << "\" font-family=\"sans-serif\" font-size=\"10\">min " << format_number(*ymin)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qtherm

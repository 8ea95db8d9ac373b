#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qtherm {

/// 12 significant digits; infinities print as "inf" / "-inf".
std::string format_number(double value);

/// Value rounded to 12 significant digits for JSON; non-finite values become strings.
nlohmann::ordered_json json_number(double value);

/// Comma-separated row of formatted numbers.
std::string csv_row(const std::vector<double>& values);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Plain line chart, one panel per series stacked vertically.
std::string svg_line_chart(const std::string& title, const std::vector<SvgSeries>& series);

}  // namespace qtherm

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace snev::cli {

// Shortest locale-free lossless rendering (17 significant digits, general form).
std::string fmt_double(double v);

// One CSV cell from a JSON scalar: numbers via fmt_double, bools as 0/1,
// null as the empty cell, strings verbatim (writers never emit commas).
std::string csv_cell(const nlohmann::json& v);

std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<nlohmann::json>& records);

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<SvgSeries>& series);

// path empty -> stdout.
void write_text(const std::string& path, const std::string& text);

}  // namespace snev::cli

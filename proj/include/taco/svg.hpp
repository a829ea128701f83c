#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace taco {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

// Minimal deterministic line-plot writer (polyline per series, log-x
// optional). Enough for RD curves and bpp-accuracy curves.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series, bool log_x);

}  // namespace taco

#include "taco/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "taco/common.hpp"

namespace taco {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 150;  // legend space
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series, bool log_x) {
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const SvgSeries& s : series) {
    for (auto [x, y] : s.points) {
      const double xv = log_x ? std::log10(x) : x;
      x_min = std::min(x_min, xv);
      x_max = std::max(x_max, xv);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_min > x_max) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max - y_min < 1e-12) {
    y_min -= 0.5;
    y_max += 0.5;
  }

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) {
    const double xv = log_x ? std::log10(x) : x;
    return kMarginLeft + (xv - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::kUnwritableOutput, path.string() + ": cannot open for writing");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";

  // frame + gridlines with tick labels
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / kTicks;
    const double gx = kMarginLeft + plot_w * i / kTicks;
    const double label = log_x ? std::pow(10.0, fx) : fx;
    out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << kMarginTop << "\" x2=\"" << fmt(gx)
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt(gx) << "\" y=\"" << kMarginTop + plot_h + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(label) << "</text>\n";

    const double fy = y_min + (y_max - y_min) * i / kTicks;
    const double gy = kMarginTop + plot_h - plot_h * i / kTicks;
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(gy) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << fmt(gy) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << fmt(gy + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(fy) << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[s].points) out << fmt(px(x)) << "," << fmt(py(y)) << " ";
    out << "\"/>\n";
    for (auto [x, y] : series[s].points) {
      out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"2.5\" fill=\""
          << color << "\"/>\n";
    }
    const double ly = kMarginTop + 14.0 * double(s);
    out << "<rect x=\"" << kMarginLeft + plot_w + 10 << "\" y=\"" << fmt(ly) << "\" width=\"10\""
        << " height=\"10\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w + 24 << "\" y=\"" << fmt(ly + 9)
        << "\" font-size=\"10\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace taco

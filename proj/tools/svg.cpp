#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "runner.hpp"

namespace pchaos::cli {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi, px_lo, px_hi;
  double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

}  // namespace

std::string emit_svg(const PlotSeries& s, const std::string& hash) {
  if (s.x.empty() || s.x.size() != s.y.size())
    throw std::invalid_argument("emit_svg: empty or mismatched series");
  const bool hist = s.kind == PlotSeries::Kind::Histogram;
  double x_lo = *std::min_element(s.x.begin(), s.x.end());
  double x_hi = *std::max_element(s.x.begin(), s.x.end());
  if (hist) x_hi += s.bin_width > 0 ? s.bin_width : 1.0;
  if (x_hi - x_lo <= 0) x_hi = x_lo + 1.0;
  double y_lo = hist ? 0.0 : *std::min_element(s.y.begin(), s.y.end());
  double y_hi = *std::max_element(s.y.begin(), s.y.end());
  if (y_hi - y_lo <= 0) y_hi = y_lo + 1.0;
  const Axis ax{x_lo, x_hi, kLeft, kWidth - kRight};
  const Axis ay{y_lo, y_hi, kHeight - kBottom, kTop};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<metadata>config-hash:" << escape(hash) << "</metadata>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(s.title) << "</text>\n";

  os << "<g class=\"data\">\n";
  if (hist) {
    const double w = s.bin_width > 0 ? s.bin_width : (x_hi - x_lo);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x0 = ax.map(s.x[i]), x1 = ax.map(s.x[i] + w);
      const double y0 = ay.map(std::max(0.0, s.y[i]));
      os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
         << "\" height=\"" << num(ay.map(0.0) - y0) << "\" fill=\"steelblue\" stroke=\"white\"/>\n";
    }
  } else {
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << (i ? " " : "") << num(ax.map(s.x[i])) << ',' << num(ay.map(s.y[i]));
    os << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g class=\"axes\" stroke=\"black\">\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
     << "\" y2=\"" << kHeight - kBottom << "\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kHeight - kBottom << "\"/>\n";
  os << "</g>\n";
  os << "<g class=\"ticks\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    os << "<text x=\"" << num(ax.map(xv)) << "\" y=\"" << kHeight - kBottom + 16
       << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(ay.map(yv) + 4)
       << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(s.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (kTop + kHeight - kBottom) / 2 << ")\">" << escape(s.y_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace pchaos::cli

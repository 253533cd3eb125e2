#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace eeplan::svg {

namespace detail {
inline std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", x);
  return b;
}
inline std::string color(double t) {
  // Dark blue to yellow ramp.
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(30 + 225 * t);
  const int g = static_cast<int>(30 + 200 * t);
  const int b = static_cast<int>(120 * (1.0 - t) + 40);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}
}  // namespace detail

/// Heatmap with one row per y label. NaN cells are drawn grey.
inline std::string heatmap(const std::string& title, const std::string& xname, const std::vector<double>& xs,
                           const std::string& yname, const std::vector<double>& ys,
                           const std::vector<std::vector<double>>& v) {
  const int cw = std::max(6, 480 / std::max<int>(1, static_cast<int>(xs.size())));
  const int ch = std::max(6, 320 / std::max<int>(1, static_cast<int>(ys.size())));
  const int W = 80 + cw * static_cast<int>(xs.size()) + 20;
  const int H = 50 + ch * static_cast<int>(ys.size()) + 50;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : v)
    for (double x : row)
      if (!std::isnan(x)) lo = std::min(lo, x), hi = std::max(hi, x);
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) + "\" height=\"" +
                  std::to_string(H) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<text x=\"10\" y=\"20\" font-size=\"14\">" + title + " (min " + detail::num(lo) + ", max " +
       detail::num(hi) + ")</text>\n";
  for (std::size_t r = 0; r < ys.size(); ++r) {
    const int y = 40 + ch * static_cast<int>(ys.size() - 1 - r);
    s += "<text x=\"5\" y=\"" + std::to_string(y + ch / 2 + 4) + "\">" + detail::num(ys[r]) + "</text>\n";
    for (std::size_t c = 0; c < xs.size(); ++c) {
      const double x = v[r][c];
      const std::string fill =
          std::isnan(x) ? "#bbbbbb" : detail::color(hi > lo ? (x - lo) / (hi - lo) : 1.0);
      s += "<rect x=\"" + std::to_string(80 + cw * static_cast<int>(c)) + "\" y=\"" + std::to_string(y) +
           "\" width=\"" + std::to_string(cw) + "\" height=\"" + std::to_string(ch) + "\" fill=\"" + fill +
           "\"/>\n";
    }
  }
  const int base = 40 + ch * static_cast<int>(ys.size());
  const std::size_t step = std::max<std::size_t>(1, xs.size() / 12);
  for (std::size_t c = 0; c < xs.size(); c += step)
    s += "<text x=\"" + std::to_string(80 + cw * static_cast<int>(c)) + "\" y=\"" + std::to_string(base + 15) +
         "\">" + detail::num(xs[c]) + "</text>\n";
  s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"" + std::to_string(base + 35) + "\">" + xname + "</text>\n";
  s += "<text x=\"5\" y=\"35\">" + yname + "</text>\n</svg>\n";
  return s;
}

struct Series {
  std::string name;
  std::vector<double> y;
};

/// Line chart over shared x values.
inline std::string lines(const std::string& title, const std::string& xname, const std::vector<double>& xs,
                         const std::string& yname, const std::vector<Series>& series) {
  const int W = 640, H = 400, L = 60, R = 150, T = 40, B = 50;
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (double x : xs) xlo = std::min(xlo, x), xhi = std::max(xhi, x);
  for (const auto& se : series)
    for (double y : se.y)
      if (!std::isnan(y)) ylo = std::min(ylo, y), yhi = std::max(yhi, y);
  if (!(yhi > ylo)) yhi = ylo + 1.0;
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  auto px = [&](double x) { return L + (W - L - R) * (x - xlo) / (xhi - xlo); };
  auto py = [&](double y) { return H - B - (H - T - B) * (y - ylo) / (yhi - ylo); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<text x=\"10\" y=\"20\" font-size=\"14\">" + title + "</text>\n";
  s += "<rect x=\"" + std::to_string(L) + "\" y=\"" + std::to_string(T) + "\" width=\"" + std::to_string(W - L - R) +
       "\" height=\"" + std::to_string(H - T - B) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  s += "<text x=\"" + std::to_string(L) + "\" y=\"" + std::to_string(H - 15) + "\">" + xname + " [" + detail::num(xlo) +
       ", " + detail::num(xhi) + "]</text>\n";
  s += "<text x=\"5\" y=\"" + std::to_string(T - 5) + "\">" + yname + " [" + detail::num(ylo) + ", " +
       detail::num(yhi) + "]</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size() && i < series[k].y.size(); ++i)
      if (!std::isnan(series[k].y[i])) pts += detail::num(px(xs[i])) + "," + detail::num(py(series[k].y[i])) + " ";
    const char* col = palette[k % 6];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + std::to_string(W - R + 10) + "\" y=\"" + std::to_string(T + 15 * (k + 1)) + "\" fill=\"" + col +
         "\">" + series[k].name + "</text>\n";
  }
  return s + "</svg>\n";
}

}  // namespace eeplan::svg

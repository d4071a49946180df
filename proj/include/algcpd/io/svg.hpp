#pragma once

// Static SVG plots: stacked panels sharing the time axis, each with line
// series and vertical detection markers. Output depends only on the input,
// so identical plots are byte-identical.

#include "algcpd/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace algcpd::io {

struct Series
{
  std::vector<double> times;
  std::vector<double> values;
  std::string color = "#1f77b4";
  bool dashed = false;
  std::string label;
};

struct Panel
{
  std::string title;
  std::vector<Series> series;
  std::vector<double> markers;             ///< detection times
  std::vector<double> reference_markers;   ///< true change times, drawn dotted
};

struct PlotSpec
{
  std::string title;
  std::vector<Panel> panels;
  int width = 960;
  int panel_height = 280;
};

namespace detail {

inline std::string num(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

inline std::string tick_label(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

inline std::string escape(const std::string& s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

/// Step 1, 2 or 5 times a power of ten giving about `count` ticks.
inline double nice_step(double span, int count)
{
  const double raw = span / count;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (m * p >= raw) return m * p;
  return 10.0 * p;
}

struct Range
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double x)
  {
    if (!std::isfinite(x)) return;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }

  void finalize()
  {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) lo -= 0.5, hi += 0.5;
  }
};

// Keeps the first, min, max and last point of each pixel column, which
// preserves the visible envelope of long series.
inline std::vector<std::pair<double, double>> decimate(const Series& s, double x0, double xScale, int width)
{
  std::vector<std::pair<double, double>> out;
  const std::size_t n = std::min(s.times.size(), s.values.size());
  if (n <= static_cast<std::size_t>(4 * width))
  {
    for (std::size_t i = 0; i < n; ++i)
      if (std::isfinite(s.values[i])) out.emplace_back(s.times[i], s.values[i]);
    return out;
  }
  std::size_t i = 0;
  while (i < n)
  {
    const long col = std::lround((s.times[i] - x0) * xScale);
    std::size_t j = i, lo = i, hi = i;
    while (j < n && std::lround((s.times[j] - x0) * xScale) == col)
    {
      if (s.values[j] < s.values[lo]) lo = j;
      if (s.values[j] > s.values[hi]) hi = j;
      ++j;
    }
    std::vector<std::size_t> keep{i, lo, hi, j - 1};
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (auto k : keep)
      if (std::isfinite(s.values[k])) out.emplace_back(s.times[k], s.values[k]);
    i = j;
  }
  return out;
}

} // namespace detail

inline void write_svg(std::ostream& os, const PlotSpec& spec)
{
  if (spec.panels.empty()) throw Error("plot needs at least one panel");
  for (const auto& p : spec.panels)
    if (p.series.empty()) throw Error("plot panel '" + p.title + "' has no series");

  const double left = 70, right = 20, top = 40, gap = 50, bottom = 40;
  const double plotW = spec.width - left - right;
  const double plotH = spec.panel_height - gap;
  const double height = top + spec.panels.size() * spec.panel_height + bottom - gap;

  detail::Range tr;
  for (const auto& p : spec.panels)
    for (const auto& s : p.series)
      for (double t : s.times) tr.add(t);
  tr.finalize();
  const double xScale = plotW / (tr.hi - tr.lo);
  auto X = [&](double t) { return left + (t - tr.lo) * xScale; };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << detail::num(height)
     << "\" viewBox=\"0 0 " << spec.width << " " << detail::num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << detail::num(height)
     << "\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    os << "<text x=\"" << detail::num(spec.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::escape(spec.title) << "</text>\n";

  const double xStep = detail::nice_step(tr.hi - tr.lo, 8);
  for (std::size_t pi = 0; pi < spec.panels.size(); ++pi)
  {
    const Panel& p = spec.panels[pi];
    const double y0 = top + pi * spec.panel_height;
    detail::Range vr;
    for (const auto& s : p.series)
      for (double v : s.values) vr.add(v);
    vr.finalize();
    const double pad = 0.05 * (vr.hi - vr.lo);
    const double vlo = vr.lo - pad, vhi = vr.hi + pad;
    auto Y = [&](double v) { return y0 + plotH - (v - vlo) / (vhi - vlo) * plotH; };

    os << "<g>\n";
    if (!p.title.empty())
      os << "<text x=\"" << detail::num(left) << "\" y=\"" << detail::num(y0 - 8) << "\">" << detail::escape(p.title)
         << "</text>\n";
    os << "<rect x=\"" << detail::num(left) << "\" y=\"" << detail::num(y0) << "\" width=\"" << detail::num(plotW)
       << "\" height=\"" << detail::num(plotH) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t = std::ceil(tr.lo / xStep) * xStep; t <= tr.hi + 1e-9 * xStep; t += xStep)
    {
      os << "<line x1=\"" << detail::num(X(t)) << "\" y1=\"" << detail::num(y0 + plotH) << "\" x2=\""
         << detail::num(X(t)) << "\" y2=\"" << detail::num(y0 + plotH + 4) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << detail::num(X(t)) << "\" y=\"" << detail::num(y0 + plotH + 16)
         << "\" text-anchor=\"middle\">" << detail::tick_label(t) << "</text>\n";
    }
    const double yStep = detail::nice_step(vhi - vlo, 5);
    for (double v = std::ceil(vlo / yStep) * yStep; v <= vhi + 1e-9 * yStep; v += yStep)
    {
      os << "<line x1=\"" << detail::num(left - 4) << "\" y1=\"" << detail::num(Y(v)) << "\" x2=\""
         << detail::num(left) << "\" y2=\"" << detail::num(Y(v)) << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << detail::num(left - 6) << "\" y=\"" << detail::num(Y(v) + 4)
         << "\" text-anchor=\"end\">" << detail::tick_label(v) << "</text>\n";
    }

    auto marker = [&](double t, const char* color, const char* dash) {
      if (t < tr.lo || t > tr.hi) return;
      os << "<line x1=\"" << detail::num(X(t)) << "\" y1=\"" << detail::num(y0) << "\" x2=\"" << detail::num(X(t))
         << "\" y2=\"" << detail::num(y0 + plotH) << "\" stroke=\"" << color << "\" stroke-dasharray=\"" << dash
         << "\"/>\n";
    };
    for (double t : p.reference_markers) marker(t, "#7f7f7f", "2,3");
    for (double t : p.markers) marker(t, "#d62728", "6,3");

    for (const auto& s : p.series)
    {
      const auto pts = detail::decimate(s, tr.lo, xScale, static_cast<int>(plotW));
      if (pts.empty()) continue;
      os << "<polyline fill=\"none\" stroke=\"" << detail::escape(s.color) << "\" stroke-width=\"1\"";
      if (s.dashed) os << " stroke-dasharray=\"6,4\"";
      os << " points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i)
        os << (i ? " " : "") << detail::num(X(pts[i].first)) << "," << detail::num(Y(pts[i].second));
      os << "\"/>\n";
    }

    double ly = y0 + 14;
    for (const auto& s : p.series)
    {
      if (s.label.empty()) continue;
      const double lx = left + plotW - 150;
      os << "<line x1=\"" << detail::num(lx) << "\" y1=\"" << detail::num(ly - 4) << "\" x2=\"" << detail::num(lx + 24)
         << "\" y2=\"" << detail::num(ly - 4) << "\" stroke=\"" << detail::escape(s.color) << "\""
         << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
      os << "<text x=\"" << detail::num(lx + 30) << "\" y=\"" << detail::num(ly) << "\">" << detail::escape(s.label)
         << "</text>\n";
      ly += 16;
    }
    os << "</g>\n";
  }
  os << "<text x=\"" << detail::num(left + plotW / 2) << "\" y=\"" << detail::num(height - 6)
     << "\" text-anchor=\"middle\">time (s)</text>\n";
  os << "</svg>\n";
}

} // namespace algcpd::io

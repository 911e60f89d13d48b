#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "../nullclines.hpp"
#include "config.hpp"

// Minimal SVG plots: stacked time-series panels and a phase-plane view.

namespace ethnokinetics::io {

inline constexpr std::array<const char*, 6> palette{"#1f5fbf", "#c0392b", "#222222",
                                                    "#2e8b57", "#8e44ad", "#d35400"};
inline constexpr const char* nullcline_colour = "#3a7bd5";

struct Series {
  std::string label;
  std::vector<double> t;
  std::vector<double> v;
  std::string colour;
  bool dashed = false;
};

namespace detail {

struct Frame {
  double x0, y0, w, h;      // pixel box
  double u_min, u_max, v_min, v_max;
  double px(double u) const { return x0 + (u - u_min) / (u_max - u_min) * w; }
  double py(double v) const { return y0 + h - (v - v_min) / (v_max - v_min) * h; }
};

inline void axes(std::ostringstream& os, const Frame& f, const std::string& title) {
  os << "<rect x=\"" << f.x0 << "\" y=\"" << f.y0 << "\" width=\"" << f.w << "\" height=\"" << f.h
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << f.x0 << "\" y=\"" << f.y0 - 6 << "\" font-size=\"12\">" << title << "</text>\n";
  os << "<text x=\"" << f.x0 << "\" y=\"" << f.y0 + f.h + 14 << "\" font-size=\"10\">"
     << format_double(f.u_min) << "</text>\n";
  os << "<text x=\"" << f.x0 + f.w - 30 << "\" y=\"" << f.y0 + f.h + 14 << "\" font-size=\"10\">"
     << format_double(f.u_max) << "</text>\n";
  os << "<text x=\"" << f.x0 - 44 << "\" y=\"" << f.y0 + 10 << "\" font-size=\"10\">"
     << format_double(f.v_max) << "</text>\n";
  os << "<text x=\"" << f.x0 - 44 << "\" y=\"" << f.y0 + f.h << "\" font-size=\"10\">"
     << format_double(f.v_min) << "</text>\n";
}

inline void polyline(std::ostringstream& os, const Frame& f, const std::vector<double>& u,
                     const std::vector<double>& v, const std::string& colour, bool dashed) {
  // thin to at most ~2000 vertices
  const std::size_t stride = std::max<std::size_t>(1, u.size() / 2000);
  os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\""
     << (dashed ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
  for (std::size_t i = 0; i < u.size(); i += stride) os << f.px(u[i]) << ',' << f.py(v[i]) << ' ';
  if (!u.empty() && (u.size() - 1) % stride) os << f.px(u.back()) << ',' << f.py(v.back());
  os << "\"/>\n";
}

inline std::array<double, 2> range_of(const std::vector<double>& a) {
  double lo = INFINITY, hi = -INFINITY;
  for (double x : a)
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (!(hi > lo)) {
    lo = std::isfinite(lo) ? lo - 0.5 : 0.0;
    hi = lo + 1.0;
  }
  return {lo, hi};
}

}  // namespace detail

/// One panel per entry of `panels`, each holding one or more series
/// against time, stacked vertically.
inline std::string svg_time_series(const std::vector<std::vector<Series>>& panels,
                                   const std::string& title) {
  const double width = 760, panel_h = 170, left = 60, top = 40, gap = 40;
  const double height = top + static_cast<double>(panels.size()) * (panel_h + gap);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\">\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    std::vector<double> all_t, all_v;
    for (const auto& s : panels[p]) {
      all_t.insert(all_t.end(), s.t.begin(), s.t.end());
      all_v.insert(all_v.end(), s.v.begin(), s.v.end());
    }
    const auto tr = detail::range_of(all_t);
    auto vr = detail::range_of(all_v);
    vr[0] = std::min(vr[0], 0.0);
    const detail::Frame f{left, top + static_cast<double>(p) * (panel_h + gap), width - left - 20,
                          panel_h, tr[0], tr[1], vr[0], vr[1] * 1.05};
    std::string label;
    for (const auto& s : panels[p]) label += (label.empty() ? "" : ", ") + s.label;
    detail::axes(os, f, label);
    for (const auto& s : panels[p]) detail::polyline(os, f, s.t, s.v, s.colour, s.dashed);
  }
  os << "</svg>\n";
  return os.str();
}

/// Phase plane: nullclines in blue, trajectories in the palette.
inline std::string svg_phase_plane(const std::vector<Polyline>& nullclines,
                                   const std::vector<std::array<std::vector<double>, 2>>& paths,
                                   const Window& w, const std::string& title,
                                   const std::string& u_label, const std::string& v_label) {
  const double size = 520, left = 60, top = 40;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + left + 20 << "\" height=\""
     << size + top + 40 << "\" font-family=\"sans-serif\">\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
  const detail::Frame f{left, top, size, size, w.x_min, w.x_max, w.y_min, w.y_max};
  detail::axes(os, f, u_label + " vs " + v_label);
  os << "<clipPath id=\"box\"><rect x=\"" << f.x0 << "\" y=\"" << f.y0 << "\" width=\"" << f.w
     << "\" height=\"" << f.h << "\"/></clipPath>\n<g clip-path=\"url(#box)\">\n";
  for (const auto& pl : nullclines) {
    std::vector<double> u, v;
    for (const auto& p : pl.points) {
      u.push_back(p[0]);
      v.push_back(p[1]);
    }
    detail::polyline(os, f, u, v, nullcline_colour, pl.axis);
  }
  for (std::size_t i = 0; i < paths.size(); ++i)
    detail::polyline(os, f, paths[i][0], paths[i][1], palette[1], false);
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace ethnokinetics::io

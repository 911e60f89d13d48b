#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace ethnokinetics {

using Point2 = std::array<double, 2>;

struct Window {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  void validate() const {
    if (!(x_max > x_min) || !(y_max > y_min))
      throw ValidationError("window", "must have positive width and height");
  }
};

struct Polyline {
  std::vector<Point2> points;
  bool axis = false;  ///< explicit coordinate-axis nullcline rather than a traced contour
};

namespace detail {

// Edge key: (i, j, dir) with dir 0 = horizontal edge from node (i,j) to
// (i+1,j), dir 1 = vertical edge from (i,j) to (i,j+1).
using EdgeKey = std::array<std::size_t, 3>;

}  // namespace detail

/// Zero level set of f on the window by marching squares over nx x ny
/// cells. Crossings are placed by linear interpolation along cell edges and
/// joined into polylines; closed loops repeat their first vertex.
template <class F>
std::vector<Polyline> contour_zero(const F& f, const Window& w, std::size_t nx, std::size_t ny) {
  w.validate();
  if (nx < 1 || ny < 1) throw ValidationError("resolution", "need at least one cell per axis");
  const double hx = (w.x_max - w.x_min) / static_cast<double>(nx);
  const double hy = (w.y_max - w.y_min) / static_cast<double>(ny);
  auto X = [&](std::size_t i) { return i == nx ? w.x_max : w.x_min + hx * static_cast<double>(i); };
  auto Y = [&](std::size_t j) { return j == ny ? w.y_max : w.y_min + hy * static_cast<double>(j); };

  std::vector<double> v((nx + 1) * (ny + 1));
  auto at = [&](std::size_t i, std::size_t j) -> double& { return v[j * (nx + 1) + i]; };
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) at(i, j) = f(X(i), Y(j));
  auto pos = [](double a) { return a >= 0.0; };

  std::map<detail::EdgeKey, Point2> crossing;
  auto edge_point = [&](const detail::EdgeKey& e) {
    auto it = crossing.find(e);
    if (it != crossing.end()) return it->first;
    const auto [i, j, dir] = e;
    const double a = at(i, j);
    const double b = dir == 0 ? at(i + 1, j) : at(i, j + 1);
    const double t = a / (a - b);
    Point2 p = dir == 0 ? Point2{X(i) + t * (X(i + 1) - X(i)), Y(j)}
                        : Point2{X(i), Y(j) + t * (Y(j + 1) - Y(j))};
    crossing.emplace(e, p);
    return e;
  };

  std::vector<std::array<detail::EdgeKey, 2>> segments;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double c00 = at(i, j), c10 = at(i + 1, j), c11 = at(i + 1, j + 1), c01 = at(i, j + 1);
      const int code = (pos(c00) ? 1 : 0) | (pos(c10) ? 2 : 0) | (pos(c11) ? 4 : 0) |
                       (pos(c01) ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const detail::EdgeKey bottom{i, j, 0}, top{i, j + 1, 0}, left{i, j, 1}, right{i + 1, j, 1};
      auto seg = [&](const detail::EdgeKey& a, const detail::EdgeKey& b) {
        segments.push_back({edge_point(a), edge_point(b)});
      };
      switch (code) {
        case 1: case 14: seg(left, bottom); break;
        case 2: case 13: seg(bottom, right); break;
        case 3: case 12: seg(left, right); break;
        case 4: case 11: seg(right, top); break;
        case 6: case 9: seg(bottom, top); break;
        case 7: case 8: seg(left, top); break;
        case 5: case 10: {
          // saddle cell, resolved by the centre value
          const bool centre = pos(0.25 * (c00 + c10 + c11 + c01));
          if ((code == 5) == centre) {
            seg(left, top);
            seg(bottom, right);
          } else {
            seg(left, bottom);
            seg(right, top);
          }
          break;
        }
        default: break;
      }
    }

  // Link segments sharing an edge crossing.
  std::map<detail::EdgeKey, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (const auto& e : segments[s]) by_edge[e].push_back(s);
  std::vector<bool> used(segments.size(), false);

  auto other_segment = [&](const detail::EdgeKey& e, std::size_t s) -> std::ptrdiff_t {
    for (std::size_t t : by_edge[e])
      if (t != s && !used[t]) return static_cast<std::ptrdiff_t>(t);
    return -1;
  };
  auto extend = [&](std::vector<detail::EdgeKey>& chain, std::size_t s) {
    for (;;) {
      const auto next = other_segment(chain.back(), s);
      if (next < 0) return;
      s = static_cast<std::size_t>(next);
      used[s] = true;
      const auto& seg = segments[s];
      chain.push_back(seg[0] == chain.back() ? seg[1] : seg[0]);
    }
  };

  std::vector<Polyline> out;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<detail::EdgeKey> forward{segments[s][0], segments[s][1]};
    extend(forward, s);
    std::vector<detail::EdgeKey> backward{segments[s][0]};
    if (forward.front() != forward.back() || forward.size() < 3) extend(backward, s);
    Polyline pl;
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) pl.points.push_back(crossing[*it]);
    for (std::size_t q = 1; q < forward.size(); ++q) pl.points.push_back(crossing[forward[q]]);
    out.push_back(std::move(pl));
  }
  return out;
}

namespace detail {

/// Segment u = 0 (axis 0) or v = 0 (axis 1) clipped to the window.
inline std::vector<Polyline> axis_segment(std::size_t free_axis, const Window& w) {
  if (free_axis == 0 && w.x_min <= 0.0 && 0.0 <= w.x_max)
    return {Polyline{{Point2{0.0, w.y_min}, Point2{0.0, w.y_max}}, true}};
  if (free_axis == 1 && w.y_min <= 0.0 && 0.0 <= w.y_max)
    return {Polyline{{Point2{w.x_min, 0.0}, Point2{w.x_max, 0.0}}, true}};
  return {};
}

template <class F>
std::vector<Polyline> nullcline_with_axis(const F& bracket, std::size_t axis, const Window& w,
                                          std::size_t nx, std::size_t ny) {
  auto out = axis_segment(axis, w);
  for (auto& pl : contour_zero(bracket, w, nx, ny)) out.push_back(std::move(pl));
  return out;
}

}  // namespace detail

/// Nullclines of the chosen equation (0: x-dot, 1: y-dot) of the
/// Lotka-Volterra model in the (x, y) plane.
inline std::vector<Polyline> nullclines_lotka_volterra(const LVParams& p, std::size_t which,
                                                       const Window& w, std::size_t nx,
                                                       std::size_t ny) {
  if (which > 1) throw ValidationError("which", "must be 0 or 1");
  if (which == 0)
    return detail::nullcline_with_axis([&](double x, double y) { return 1.0 - x + p.beta1 * y; },
                                       0, w, nx, ny);
  return detail::nullcline_with_axis([&](double x, double y) { return 1.0 - y + p.beta2 * x; }, 1,
                                     w, nx, ny);
}

/// Nullclines of the two-variable model in the (x, y) plane.
inline std::vector<Polyline> nullclines_two_var(const TwoVarParams& p, std::size_t which,
                                                const Window& w, std::size_t nx, std::size_t ny) {
  if (which > 1) throw ValidationError("which", "must be 0 or 1");
  if (which == 0)
    return detail::nullcline_with_axis(
        [&](double x, double y) { return (1.0 - x) * (x - p.alpha) + p.beta1 * (y - p.y0); }, 0, w,
        nx, ny);
  return detail::nullcline_with_axis([&](double x, double y) { return p.y0 - y + p.beta2 * x; }, 1,
                                     w, nx, ny);
}

/// Nullclines of equation `which` (0, 1, 2) of the three-variable model on
/// the (x, y) plane at fixed z.
inline std::vector<Polyline> nullclines_three_var(const ThreeVarParams& p, std::size_t which,
                                                  double z, const Window& w, std::size_t nx,
                                                  std::size_t ny) {
  if (which > 2) throw ValidationError("which", "must be 0, 1 or 2");
  auto bracket = [&](double x, double y) {
    switch (which) {
      case 0: return ThreeVarBrackets::x(p, x, y, z);
      case 1: return ThreeVarBrackets::y(p, x, y, z);
      default: return ThreeVarBrackets::z(p, x, y, z);
    }
  };
  if (which == 2) return contour_zero(bracket, w, nx, ny);
  return detail::nullcline_with_axis(bracket, which, w, nx, ny);
}

}  // namespace ethnokinetics

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "state.hpp"
#include "time_grid.hpp"

namespace ethnokinetics {

/// Sampled solution: one state per grid point.
template <std::size_t N>
struct Trajectory {
  TimeGrid grid;
  std::vector<State<N>> samples;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return samples.size(); }
  double time(std::size_t i) const { return grid.time(i); }
  const State<N>& operator[](std::size_t i) const { return samples[i]; }
  const State<N>& back() const { return samples.back(); }

  std::vector<double> column(std::size_t k) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s[k]);
    return out;
  }

  /// (value, time) of the maximum of component k.
  std::pair<double, double> peak(std::size_t k) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (samples[i][k] > samples[best][k]) best = i;
    return {samples[best][k], grid.time(best)};
  }
};

inline std::vector<std::string> default_labels(std::size_t n) {
  switch (n) {
    case 2: return {"x", "y"};
    case 3: return {"x", "y", "z"};
    case 6: return {"x1", "y1", "z1", "x2", "y2", "z2"};
    default: {
      std::vector<std::string> l;
      for (std::size_t i = 0; i < n; ++i) l.push_back("u" + std::to_string(i + 1));
      return l;
    }
  }
}

/// Largest componentwise difference between two trajectories sampled on the
/// same number of points.
template <std::size_t N>
double sup_difference(const Trajectory<N>& a, const Trajectory<N>& b) {
  double m = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

}  // namespace ethnokinetics

#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "../equilibria.hpp"
#include "../nullclines.hpp"
#include "../sde.hpp"
#include "../trajectory.hpp"
#include "config.hpp"

// Comma-separated output. Numbers use the shortest round-trip form from
// std::to_chars, which ignores the locale.

namespace ethnokinetics::io {

template <std::size_t N>
void write_trajectory_csv(std::ostream& os, const Trajectory<N>& traj,
                          const std::string& time_label = "t") {
  os << time_label;
  for (const auto& l : traj.labels) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_double(traj.time(i));
    for (std::size_t k = 0; k < N; ++k) os << ',' << format_double(traj[i][k]);
    os << '\n';
  }
}

inline void write_ensemble_csv(std::ostream& os, const EnsembleSummary& sum,
                               const std::vector<std::string>& labels = {"x", "y", "z"}) {
  os << 't';
  for (const auto& l : labels) os << ",mean_" << l << ",p10_" << l << ",p50_" << l << ",p90_" << l;
  os << '\n';
  for (std::size_t i = 0; i < sum.times.size(); ++i) {
    os << format_double(sum.times[i]);
    for (const auto& b : sum.bands)
      os << ',' << format_double(b.mean[i]) << ',' << format_double(b.p10[i]) << ','
         << format_double(b.p50[i]) << ',' << format_double(b.p90[i]);
    os << '\n';
  }
}

/// One row per successful run: index, seed, peak of x, bust count.
inline void write_runs_csv(std::ostream& os, const EnsembleSummary& sum) {
  os << "run,seed,peak_x,busts\n";
  std::size_t j = 0;
  for (std::size_t r = 0; r < sum.runs; ++r) {
    bool failed = false;
    for (const auto& f : sum.failures) failed = failed || f.run == r;
    if (failed) continue;
    os << r << ',' << derive_seed(sum.base_seed, r) << ',' << format_double(sum.peaks[j]) << ','
       << sum.bust_counts[j] << '\n';
    ++j;
  }
}

template <std::size_t N>
void write_equilibria_csv(std::ostream& os, const EquilibriumSet<N>& set) {
  static constexpr const char* names[] = {"x", "y", "z"};
  for (std::size_t k = 0; k < N; ++k) os << names[k] << ',';
  os << "family,stability,re_lambda_max\n";
  for (const auto& e : set.points) {
    for (std::size_t k = 0; k < N; ++k) os << format_double(e.point[k]) << ',';
    os << to_string(e.family) << ',' << to_string(e.stability) << ','
       << format_double(e.max_real()) << '\n';
  }
}

/// Long format: one row per vertex.
inline void write_nullclines_csv(std::ostream& os, const std::vector<std::vector<Polyline>>& per_variable,
                                 const std::vector<std::string>& variable_names) {
  os << "variable,polyline,kind,u,v\n";
  for (std::size_t var = 0; var < per_variable.size(); ++var) {
    std::size_t id = 0;
    for (const auto& pl : per_variable[var]) {
      for (const auto& p : pl.points)
        os << variable_names[var] << ',' << id << ',' << (pl.axis ? "axis" : "contour") << ','
           << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
      ++id;
    }
  }
}

}  // namespace ethnokinetics::io

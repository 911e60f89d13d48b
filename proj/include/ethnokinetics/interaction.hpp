#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "brownian.hpp"
#include "model.hpp"
#include "sde.hpp"
#include "trajectory.hpp"

namespace ethnokinetics {

/// Grid on [0, tf] whose knots include the birth time T1 and the
/// communication onset T1 + T2 (when they fall inside the horizon).
inline TimeGrid interaction_grid(double tf, double dt, const InteractionSpec& spec) {
  std::vector<double> knots;
  for (double k : {spec.T1, spec.onset()})
    if (k > 0.0 && k < tf) knots.push_back(k);
  return TimeGrid(0.0, tf, dt, std::move(knots));
}

struct DualTrajectory {
  TimeGrid grid;
  Trajectory<3> ethnos1;
  Trajectory<3> ethnos2;
  InteractionSpec spec;

  /// Stacked (x1, y1, z1, x2, y2, z2) view for output.
  Trajectory<6> combined() const {
    Trajectory<6> out{grid, {}, default_labels(6)};
    out.samples.reserve(ethnos1.size());
    for (std::size_t i = 0; i < ethnos1.size(); ++i) {
      const auto& a = ethnos1[i];
      const auto& b = ethnos2[i];
      out.samples.push_back(State6{a[0], a[1], a[2], b[0], b[1], b[2]});
    }
    return out;
  }
};

/// Log-coordinate drift of the coupled system, (v1, v2) = (ln ethnos 1,
/// ln ethnos 2). Zero for ethnos 2 before T1; the cross-suppression
/// -gamma1 c X_other is added from T1 + T2 on.
inline std::pair<LogState3, LogState3> interaction_log_drift(const LogState3& v1,
                                                             const LogState3& v2,
                                                             const ThreeVarParams& p,
                                                             const InteractionSpec& spec,
                                                             double t) {
  const auto gates = InteractionGates::at(spec, t);
  LogState3 d1 = drift_log_three_var(v1, p);
  LogState3 d2{};
  if (gates.second_alive) d2 = drift_log_three_var(v2, p);
  if (gates.coupled) {
    d1[0] -= p.gamma1 * spec.c1 * std::exp(v2[0]);
    d2[0] -= p.gamma1 * spec.c2 * std::exp(v1[0]);
  }
  return {d1, d2};
}

/// Euler-Maruyama in log coordinates for both ethnoses. Brownian
/// components 0-2 drive ethnos 1, 3-5 drive ethnos 2. Ethnos 2 is not
/// updated at all while t < T1, so it holds its initial state until birth.
inline DualTrajectory integrate_interacting(const ThreeVarParams& p, const NoiseSpec& n,
                                            const InteractionSpec& spec, const State3& initial,
                                            const TimeGrid& grid, const BrownianPath& path) {
  p.validate();
  n.validate();
  spec.validate();
  require_stochastic_signs(p);
  detail::require_positive(initial);
  if (path.dims() != 6) throw ValidationError("path", "expected 6 Brownian components");
  if (!(path.grid() == grid)) throw ValidationError("path", "Brownian path is on a different grid");
  for (double k : {spec.T1, spec.onset()})
    if (k >= grid.t0() && k <= grid.tf() && !grid.is_grid_point(k))
      throw KnotMisalignment("gate time " + std::to_string(k) +
                             " is not a grid point; add it to the grid knots");

  DualTrajectory out{grid, {grid, {}, default_labels(3)}, {grid, {}, default_labels(3)}, spec};
  out.ethnos1.samples.reserve(grid.size());
  out.ethnos2.samples.reserve(grid.size());
  out.ethnos1.samples.push_back(initial);
  out.ethnos2.samples.push_back(initial);

  LogState3 v1 = to_log(initial), v2 = to_log(initial);
  bool born = false;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.time(k), h = grid.step(k);
    const auto [d1, d2] = interaction_log_drift(v1, v2, p, spec, t);
    const auto dw = path.increment(k);
    for (std::size_t i = 0; i < 3; ++i) v1[i] += d1[i] * h + n.sigma(i) * dw[i];
    if (InteractionGates::at(spec, t).second_alive) {
      born = true;
      for (std::size_t i = 0; i < 3; ++i) v2[i] += d2[i] * h + n.sigma(i) * dw[3 + i];
    }

    const State3 s1 = from_log(v1), s2 = born ? from_log(v2) : initial;
    if (!all_finite(s1) || !all_finite(s2))
      throw NonFiniteState("coupled Euler-Maruyama diverged at t=" + std::to_string(grid.time(k + 1)));
    out.ethnos1.samples.push_back(s1);
    out.ethnos2.samples.push_back(s2);
  }
  return out;
}

inline DualTrajectory integrate_interacting(const ThreeVarParams& p, const NoiseSpec& n,
                                            const InteractionSpec& spec, const State3& initial,
                                            const TimeGrid& grid) {
  return integrate_interacting(p, n, spec, initial, grid, brownian_path(grid, 6, n.seed));
}

// ---------------------------------------------------------------------------

enum class Suppressed { ethnos1, ethnos2, neither };

inline const char* to_string(Suppressed s) {
  switch (s) {
    case Suppressed::ethnos1: return "ethnos1";
    case Suppressed::ethnos2: return "ethnos2";
    case Suppressed::neither: return "neither";
  }
  return "?";
}

struct DominanceReport {
  double peak1 = 0.0;
  double peak2 = 0.0;
  double peak_ratio = 0.0;  ///< peak2 / peak1
  Suppressed suppressed = Suppressed::neither;
  double margin = 0.0;
};

/// Uncoupled reference peaks of X1 and X2.
struct ReferencePeaks {
  double ethnos1;
  double ethnos2;
};

/// With references, the suppressed ethnos is the one whose peak fell
/// furthest below its own reference (margin = difference of relative
/// deficits). Without, it is the smaller-peak ethnos (margin = relative gap).
/// Margins below tie_tolerance give `neither`.
inline DominanceReport dominance_report(const DualTrajectory& dual, double tie_tolerance,
                                        std::optional<ReferencePeaks> refs = std::nullopt) {
  DominanceReport r;
  r.peak1 = dual.ethnos1.peak(0).first;
  r.peak2 = dual.ethnos2.peak(0).first;
  r.peak_ratio = r.peak2 / r.peak1;

  double score1, score2;  // larger = more suppressed
  if (refs) {
    score1 = (refs->ethnos1 - r.peak1) / refs->ethnos1;
    score2 = (refs->ethnos2 - r.peak2) / refs->ethnos2;
  } else {
    const double top = std::max(r.peak1, r.peak2);
    score1 = (top - r.peak1) / top;
    score2 = (top - r.peak2) / top;
  }
  r.margin = std::fabs(score1 - score2);
  if (r.margin < tie_tolerance)
    r.suppressed = Suppressed::neither;
  else
    r.suppressed = score2 > score1 ? Suppressed::ethnos2 : Suppressed::ethnos1;
  return r;
}

}  // namespace ethnokinetics

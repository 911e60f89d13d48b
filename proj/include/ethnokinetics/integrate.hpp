#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "trajectory.hpp"

namespace ethnokinetics {

/// f(t, s) -> ds/dt
template <class F, std::size_t N>
concept RightHandSide = requires(const F& f, double t, const State<N>& s) {
  { f(t, s) } -> std::convertible_to<State<N>>;
};

/// Classical fixed-step RK4 over the points of grid.
template <std::size_t N, RightHandSide<N> Rhs>
Trajectory<N> integrate_ode(const Rhs& rhs, const State<N>& initial, const TimeGrid& grid) {
  Trajectory<N> traj{grid, {}, default_labels(N)};
  traj.samples.reserve(grid.size());
  traj.samples.push_back(initial);
  State<N> s = initial;
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double t = grid.time(n);
    const double h = grid.step(n);
    const State<N> k1 = rhs(t, s);
    const State<N> k2 = rhs(t + 0.5 * h, s + (0.5 * h) * k1);
    const State<N> k3 = rhs(t + 0.5 * h, s + (0.5 * h) * k2);
    const State<N> k4 = rhs(t + h, s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(s))
      throw NonFiniteState("RK4 produced a non-finite state at t=" + std::to_string(grid.time(n + 1)) +
                           "; reduce dt or check parameters");
    traj.samples.push_back(s);
  }
  return traj;
}

namespace detail {

template <std::size_t N>
void require_positive(const State<N>& s) {
  for (std::size_t i = 0; i < N; ++i)
    if (!(s[i] > 0.0 && std::isfinite(s[i])))
      throw ValidationError("initial", "population components must be strictly positive");
}

}  // namespace detail

inline Trajectory<2> integrate_lotka_volterra(const LVParams& p, const State2& initial,
                                              const TimeGrid& grid) {
  detail::require_positive(initial);
  return integrate_ode<2>([&p](double, const State2& s) { return rhs_lotka_volterra(s, p); },
                          initial, grid);
}

inline Trajectory<2> integrate_two_var(const TwoVarParams& p, const State2& initial,
                                       const TimeGrid& grid) {
  detail::require_positive(initial);
  return integrate_ode<2>([&p](double, const State2& s) { return rhs_two_var(s, p); }, initial,
                          grid);
}

inline Trajectory<3> integrate_three_var(const ThreeVarParams& p, const State3& initial,
                                         const TimeGrid& grid) {
  detail::require_positive(initial);
  return integrate_ode<3>([&p](double, const State3& s) { return rhs_three_var(s, p); },
                          initial, grid);
}

// ---------------------------------------------------------------------------
// Excitation (bust) detection

template <std::size_t N>
struct ExcitationReport {
  bool excited = false;
  double peak_value = 0.0;
  double peak_time = 0.0;
  double spike_duration = 0.0;  ///< time spent above the duration level around the peak
  State<N> terminal_state{};
  std::optional<std::size_t> terminal_attractor;  ///< index into the supplied equilibria
};

template <std::size_t N>
struct ExcitationOptions {
  std::size_t x_index = 0;
  double excitation_level = 0.1;
  /// Reference level for spike_duration; NaN means use excitation_level.
  double duration_level = std::numeric_limits<double>::quiet_NaN();
  double settle_tolerance = 1e-3;
  std::span<const State<N>> equilibria{};
};

/// Sub-threshold means the peak never reaches twice the larger of the
/// initial push and the threshold.
inline double default_excitation_level(double x0, double alpha) {
  return 2.0 * std::max(x0, alpha);
}

template <std::size_t N>
ExcitationReport<N> detect_excitation(const Trajectory<N>& traj, const ExcitationOptions<N>& opt) {
  if (traj.size() == 0) throw ValidationError("trajectory", "must not be empty");
  const std::size_t k = opt.x_index;
  ExcitationReport<N> rep;

  std::size_t ipk = 0;
  for (std::size_t i = 1; i < traj.size(); ++i)
    if (traj[i][k] > traj[ipk][k]) ipk = i;
  rep.peak_value = traj[ipk][k];
  rep.peak_time = traj.time(ipk);
  rep.excited = rep.peak_value >= opt.excitation_level;

  const double level =
      std::isnan(opt.duration_level) ? opt.excitation_level : opt.duration_level;
  if (rep.peak_value >= level) {
    // Walk outwards from the peak to the level crossings, interpolating linearly.
    std::size_t lo = ipk;
    while (lo > 0 && traj[lo - 1][k] >= level) --lo;
    std::size_t hi = ipk;
    while (hi + 1 < traj.size() && traj[hi + 1][k] >= level) ++hi;
    auto cross = [&](std::size_t a, std::size_t b) {
      const double va = traj[a][k], vb = traj[b][k];
      const double w = (level - va) / (vb - va);
      return traj.time(a) + w * (traj.time(b) - traj.time(a));
    };
    const double start = lo == 0 ? traj.time(0) : cross(lo - 1, lo);
    const double end = hi + 1 == traj.size() ? traj.time(hi) : cross(hi, hi + 1);
    rep.spike_duration = std::max(0.0, end - start);
  }

  rep.terminal_state = traj.back();
  double best = opt.settle_tolerance;
  for (std::size_t e = 0; e < opt.equilibria.size(); ++e) {
    const double d = norm(rep.terminal_state - opt.equilibria[e]);
    if (d <= best) {
      best = d;
      rep.terminal_attractor = e;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Conversion to calendar years and head-counts

/// x = 1 corresponds to K passionaries, y = 1 (and z = 1) to
/// nonpassionary_factor * K people; one model time unit is years_per_unit.
struct RealScale {
  double years_per_unit = 15.0;
  double K = 10000.0;
  double nonpassionary_factor = 100.0;

  void validate() const {
    detail::require(years_per_unit > 0.0, "scale.years_per_unit", "must be positive");
    detail::require(K > 0.0, "scale.K", "must be positive");
    detail::require(nonpassionary_factor > 0.0, "scale.nonpassionary_factor", "must be positive");
  }
  double years(double model_time) const { return model_time * years_per_unit; }
  double passionaries(double x) const { return x * K; }
  double nonpassionaries(double y) const { return y * nonpassionary_factor * K; }
  friend bool operator==(const RealScale&, const RealScale&) = default;
};

inline std::vector<std::size_t> passionary_indices(std::size_t n) {
  if (n == 6) return {0, 3};
  return {0};
}

/// Times in years, passionary columns in persons, all other columns in
/// persons of the nonpassionary scale.
template <std::size_t N>
Trajectory<N> scale_to_real(const Trajectory<N>& traj, const RealScale& scale) {
  scale.validate();
  const auto pidx = passionary_indices(N);
  Trajectory<N> out{traj.grid.scaled(scale.years_per_unit), traj.samples, traj.labels};
  for (auto& s : out.samples)
    for (std::size_t i = 0; i < N; ++i)
      s[i] = std::find(pidx.begin(), pidx.end(), i) != pidx.end() ? scale.passionaries(s[i])
                                                                  : scale.nonpassionaries(s[i]);
  return out;
}

}  // namespace ethnokinetics

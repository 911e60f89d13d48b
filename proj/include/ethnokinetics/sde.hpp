#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "brownian.hpp"
#include "errors.hpp"
#include "integrate.hpp"
#include "model.hpp"
#include "trajectory.hpp"

namespace ethnokinetics {

namespace detail {

inline void check_sde_inputs(const ThreeVarParams& p, const NoiseSpec& n, const State3& initial,
                             const TimeGrid& grid, const BrownianPath& path, std::size_t dims) {
  p.validate();
  n.validate();
  require_stochastic_signs(p);
  require_positive(initial);
  if (path.dims() != dims)
    throw ValidationError("path", "expected " + std::to_string(dims) + " Brownian components");
  if (!(path.grid() == grid)) throw ValidationError("path", "Brownian path is on a different grid");
}

}  // namespace detail

/// Euler-Maruyama in log coordinates, returned in population coordinates.
/// Every sample is strictly positive since it is an exponential.
inline Trajectory<3> integrate_sde_log(const ThreeVarParams& p, const NoiseSpec& n,
                                       const State3& initial, const TimeGrid& grid,
                                       const BrownianPath& path) {
  detail::check_sde_inputs(p, n, initial, grid, path, 3);
  Trajectory<3> traj{grid, {}, default_labels(3)};
  traj.samples.reserve(grid.size());
  traj.samples.push_back(initial);

  LogState3 v = to_log(initial);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double h = grid.step(k);
    const LogState3 f = drift_log_three_var(v, p);
    for (std::size_t i = 0; i < 3; ++i) v[i] += f[i] * h + n.sigma(i) * path.increment(k, i);
    State3 s = from_log(v);
    if (!all_finite(v) || !all_finite(s))
      throw NonFiniteState("log-space Euler-Maruyama diverged at t=" +
                           std::to_string(grid.time(k + 1)));
    traj.samples.push_back(s);
  }
  return traj;
}

/// Euler-Maruyama on the population-coordinate form with Ito-corrected drift.
/// Kept as an independent cross-check of the log-space integrator.
inline Trajectory<3> integrate_sde_direct(const ThreeVarParams& p, const NoiseSpec& n,
                                          const State3& initial, const TimeGrid& grid,
                                          const BrownianPath& path) {
  detail::check_sde_inputs(p, n, initial, grid, path, 3);
  Trajectory<3> traj{grid, {}, default_labels(3)};
  traj.samples.reserve(grid.size());
  traj.samples.push_back(initial);

  State3 s = initial;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double h = grid.step(k);
    const State3 f = drift_direct_three_var(s, p, n);
    State3 next;
    for (std::size_t i = 0; i < 3; ++i)
      next[i] = s[i] + f[i] * h + n.sigma(i) * s[i] * path.increment(k, i);
    for (std::size_t i = 0; i < 3; ++i)
      if (!(next[i] > 0.0) || !std::isfinite(next[i]))
        throw NonFiniteState("direct Euler-Maruyama left the positive orthant at t=" +
                             std::to_string(grid.time(k + 1)) + "; reduce dt");
    s = next;
    traj.samples.push_back(s);
  }
  return traj;
}

inline Trajectory<3> integrate_sde_log(const ThreeVarParams& p, const NoiseSpec& n,
                                       const State3& initial, const TimeGrid& grid) {
  return integrate_sde_log(p, n, initial, grid, brownian_path(grid, 3, n.seed));
}

// ---------------------------------------------------------------------------
// Busts and ensembles

/// Counts maximal excursions of `values` above `level`. After a bust, a new
/// one can only start once the series has dropped below rearm_level.
inline std::size_t count_busts(std::span<const double> values, double level, double rearm_level) {
  std::size_t count = 0;
  bool armed = true;
  for (double v : values) {
    if (armed && v >= level) {
      ++count;
      armed = false;
    } else if (!armed && v < rearm_level) {
      armed = true;
    }
  }
  return count;
}

struct EnsembleOptions {
  std::size_t runs = 200;
  double bust_level = 0.3;
  /// A new bust needs a return below bust_level * rearm_fraction.
  double rearm_fraction = 0.25;
  /// Summary bands are recorded every record_stride grid points (0: auto,
  /// about 1000 points).
  std::size_t record_stride = 0;
  /// 0: hardware concurrency.
  unsigned workers = 0;
};

/// Per-time statistics of one variable across runs.
struct Bands {
  std::vector<double> mean, p10, p50, p90;
};

struct RunFailure {
  std::size_t run;
  std::uint64_t seed;
  std::string message;
};

struct EnsembleSummary {
  std::vector<double> times;
  std::array<Bands, 3> bands;
  std::vector<double> peaks;              ///< peak of X per successful run, by run index
  std::vector<std::size_t> bust_counts;   ///< busts per successful run, by run index
  std::vector<RunFailure> failures;
  std::size_t runs = 0;
  std::uint64_t base_seed = 0;
  std::string seed_policy = "run seed = derive_seed(base_seed, run_index) (splitmix64)";

  double fraction_with_at_least(std::size_t busts) const {
    if (bust_counts.empty()) return 0.0;
    const auto n = std::count_if(bust_counts.begin(), bust_counts.end(),
                                 [busts](std::size_t b) { return b >= busts; });
    return static_cast<double>(n) / static_cast<double>(bust_counts.size());
  }
};

/// Linear-interpolation quantile of a sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

inline double mean(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? std::nan("") : acc / static_cast<double>(v.size());
}

inline double stddev(std::span<const double> v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return v.size() < 2 ? 0.0 : std::sqrt(acc / static_cast<double>(v.size() - 1));
}

namespace detail {

/// Runs body(i) for i in [0, count) on `workers` threads.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline EnsembleSummary ensemble_stats(const ThreeVarParams& p, const NoiseSpec& n,
                                      const State3& initial, const TimeGrid& grid,
                                      const EnsembleOptions& opt) {
  if (opt.runs == 0) throw ValidationError("runs", "must be >= 1");
  p.validate();
  n.validate();
  require_stochastic_signs(p);
  detail::require_positive(initial);

  const std::size_t stride =
      opt.record_stride > 0 ? opt.record_stride : std::max<std::size_t>(1, grid.steps() / 1000);
  std::vector<std::size_t> recorded;
  for (std::size_t i = 0; i < grid.size(); i += stride) recorded.push_back(i);
  if (recorded.back() != grid.size() - 1) recorded.push_back(grid.size() - 1);

  struct RunResult {
    bool ok = false;
    double peak = 0.0;
    std::size_t busts = 0;
    std::vector<State3> samples;
    std::string error;
  };
  std::vector<RunResult> results(opt.runs);

  detail::parallel_for(opt.runs, opt.workers, [&](std::size_t r) {
    RunResult& out = results[r];
    try {
      const auto seed = derive_seed(n.seed, r);
      const auto traj = integrate_sde_log(p, n, initial, grid, brownian_path(grid, 3, seed));
      const auto x = traj.column(0);
      out.peak = *std::max_element(x.begin(), x.end());
      out.busts = count_busts(x, opt.bust_level, opt.bust_level * opt.rearm_fraction);
      out.samples.reserve(recorded.size());
      for (std::size_t i : recorded) out.samples.push_back(traj[i]);
      out.ok = true;
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  EnsembleSummary sum;
  sum.runs = opt.runs;
  sum.base_seed = n.seed;
  for (std::size_t i : recorded) sum.times.push_back(grid.time(i));
  std::vector<std::size_t> good;
  for (std::size_t r = 0; r < opt.runs; ++r) {
    if (results[r].ok) {
      good.push_back(r);
      sum.peaks.push_back(results[r].peak);
      sum.bust_counts.push_back(results[r].busts);
    } else {
      sum.failures.push_back({r, derive_seed(n.seed, r), results[r].error});
    }
  }

  std::vector<double> column(good.size());
  for (std::size_t var = 0; var < 3; ++var) {
    Bands& b = sum.bands[var];
    for (std::size_t j = 0; j < recorded.size(); ++j) {
      for (std::size_t g = 0; g < good.size(); ++g) column[g] = results[good[g]].samples[j][var];
      b.mean.push_back(mean(column));
      std::sort(column.begin(), column.end());
      b.p10.push_back(quantile_sorted(column, 0.10));
      b.p50.push_back(quantile_sorted(column, 0.50));
      b.p90.push_back(quantile_sorted(column, 0.90));
    }
  }
  return sum;
}

}  // namespace ethnokinetics

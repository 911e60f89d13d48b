#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ethnokinetics {

/// Discrete time axis on [t0, tf] with nominal step dt.
///
/// Mandatory knots split the interval into segments; each segment of length
/// L gets n = ceil(L / dt) equal steps, so the realised step never exceeds dt
/// and every knot is a grid point bit-exactly. Without knots the grid is
/// uniform.
class TimeGrid {
 public:
  TimeGrid(double t0, double tf, double dt, std::vector<double> knots = {})
      : t0_(t0), tf_(tf), dt_(dt), knots_(std::move(knots)) {
    if (!(std::isfinite(t0) && std::isfinite(tf) && t0 < tf))
      throw ValidationError("grid.tf", "need finite t0 < tf");
    if (!(dt > 0.0 && std::isfinite(dt))) throw ValidationError("grid.dt", "must be positive");
    for (double k : knots_)
      if (!(k >= t0 && k <= tf)) throw ValidationError("grid.knots", "knot outside [t0, tf]");
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    build();
  }

  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  /// Nominal (requested) step.
  double dt() const noexcept { return dt_; }
  const std::vector<double>& knots() const noexcept { return knots_; }

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t steps() const noexcept { return times_.size() - 1; }
  double time(std::size_t i) const { return times_[i]; }
  double step(std::size_t i) const { return times_[i + 1] - times_[i]; }
  std::span<const double> times() const noexcept { return times_; }

  bool is_grid_point(double t) const {
    return std::binary_search(times_.begin(), times_.end(), t);
  }

  /// Index of the first grid point >= t (size() if none).
  std::size_t index_at_or_after(double t) const {
    return static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) -
                                    times_.begin());
  }

  /// Every factor-th point of this grid. Each knot segment must have a step
  /// count divisible by factor, otherwise knots would fall between points.
  TimeGrid coarsened(std::size_t factor) const {
    if (factor == 0) throw ValidationError("factor", "must be >= 1");
    for (std::size_t n : segment_steps_)
      if (n % factor != 0)
        throw KnotMisalignment("segment step count " + std::to_string(n) +
                               " not divisible by coarsening factor " + std::to_string(factor));
    TimeGrid g = *this;
    g.dt_ = dt_ * static_cast<double>(factor);
    g.times_.clear();
    for (std::size_t i = 0; i < times_.size(); i += factor) g.times_.push_back(times_[i]);
    for (auto& n : g.segment_steps_) n /= factor;
    return g;
  }

  /// Same grid with every time multiplied by factor (unit conversion).
  TimeGrid scaled(double factor) const {
    if (!(factor > 0.0)) throw ValidationError("factor", "must be positive");
    TimeGrid g = *this;
    g.t0_ *= factor;
    g.tf_ *= factor;
    g.dt_ *= factor;
    for (auto& k : g.knots_) k *= factor;
    for (auto& t : g.times_) t *= factor;
    return g;
  }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.t0_ == b.t0_ && a.tf_ == b.tf_ && a.dt_ == b.dt_ && a.knots_ == b.knots_ &&
           a.times_ == b.times_;
  }

 private:
  static std::size_t step_count(double span, double dt) {
    const double r = span / dt;
    const double nearest = std::round(r);
    // Spans that are an integer multiple of dt up to rounding keep that count.
    if (nearest >= 1.0 && std::fabs(r - nearest) <= 1e-9 * nearest)
      return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::max(1.0, std::ceil(r)));
  }

  void build() {
    std::vector<double> bounds{t0_};
    for (double k : knots_)
      if (k > t0_ && k < tf_) bounds.push_back(k);
    bounds.push_back(tf_);

    times_.assign(1, t0_);
    segment_steps_.clear();
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      const double a = bounds[s], b = bounds[s + 1];
      const std::size_t n = step_count(b - a, dt_);
      const double h = (b - a) / static_cast<double>(n);
      for (std::size_t j = 1; j < n; ++j) times_.push_back(a + static_cast<double>(j) * h);
      times_.push_back(b);
      segment_steps_.push_back(n);
    }
  }

  double t0_, tf_, dt_;
  std::vector<double> knots_;
  std::vector<double> times_;
  std::vector<std::size_t> segment_steps_;
};

}  // namespace ethnokinetics

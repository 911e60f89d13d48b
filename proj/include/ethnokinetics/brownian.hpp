#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "errors.hpp"
#include "time_grid.hpp"

namespace ethnokinetics {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of run (or path) `index` of an ensemble drawn from base seed.
/// Depends only on (base, index), never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base ^ mix64(index + 0xD1B54A32D192ED03ULL));
}

/// Standard normal source. Boost's engine and ziggurat normal are fully
/// specified, so a seed reproduces the same draws on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return normal_(engine_); }

 private:
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

/// Pre-drawn Brownian increments on a grid; step n holds `dims` independent
/// N(0, h_n) draws. Sharing a path between integrators compares them on the
/// same realisation.
class BrownianPath {
 public:
  BrownianPath(TimeGrid grid, std::size_t dims, std::vector<double> increments)
      : grid_(std::move(grid)), dims_(dims), increments_(std::move(increments)) {
    if (dims_ == 0) throw ValidationError("dims", "must be >= 1");
    if (increments_.size() != grid_.steps() * dims_)
      throw ValidationError("increments", "size must equal steps * dims");
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t steps() const noexcept { return grid_.steps(); }

  std::span<const double> increment(std::size_t step) const {
    return {increments_.data() + step * dims_, dims_};
  }
  double increment(std::size_t step, std::size_t dim) const {
    return increments_[step * dims_ + dim];
  }

  /// W_dim at every grid point, starting from 0.
  std::vector<double> cumulative(std::size_t dim) const {
    std::vector<double> w(grid_.size(), 0.0);
    for (std::size_t n = 0; n < steps(); ++n) w[n + 1] = w[n] + increment(n, dim);
    return w;
  }

  /// The same realisation seen on every factor-th grid point.
  BrownianPath coarsened(std::size_t factor) const {
    TimeGrid g = grid_.coarsened(factor);
    std::vector<double> inc(g.steps() * dims_, 0.0);
    for (std::size_t n = 0; n < steps(); ++n)
      for (std::size_t d = 0; d < dims_; ++d) inc[(n / factor) * dims_ + d] += increment(n, d);
    return BrownianPath(std::move(g), dims_, std::move(inc));
  }

  friend bool operator==(const BrownianPath&, const BrownianPath&) = default;

 private:
  TimeGrid grid_;
  std::size_t dims_;
  std::vector<double> increments_;
};

inline BrownianPath brownian_path(const TimeGrid& grid, std::size_t dims, std::uint64_t seed) {
  if (dims == 0) throw ValidationError("dims", "must be >= 1");
  NormalStream normal(seed);
  std::vector<double> inc;
  inc.reserve(grid.steps() * dims);
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double sd = std::sqrt(grid.step(n));
    for (std::size_t d = 0; d < dims; ++d) inc.push_back(sd * normal());
  }
  return BrownianPath(grid, dims, std::move(inc));
}

}  // namespace ethnokinetics

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "model.hpp"

namespace ethnokinetics {

enum class Family { origin, axis_y, axis_x_pair, interior, x2_family, x34_family, x56_family, numeric };
enum class Stability { stable, unstable, saddle, marginal };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::origin: return "origin";
    case Family::axis_y: return "axis_y";
    case Family::axis_x_pair: return "axis_x_pair";
    case Family::interior: return "interior";
    case Family::x2_family: return "x2_family";
    case Family::x34_family: return "x34_family";
    case Family::x56_family: return "x56_family";
    case Family::numeric: return "numeric";
  }
  return "?";
}

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::saddle: return "saddle";
    case Stability::marginal: return "marginal";
  }
  return "?";
}

/// |Re(lambda)| at or below this counts as zero.
inline constexpr double marginal_tolerance = 1e-8;

inline Stability stability_from(const std::vector<std::complex<double>>& eig) {
  bool any_pos = false, any_neg = false;
  for (const auto& l : eig) {
    if (std::fabs(l.real()) <= marginal_tolerance) return Stability::marginal;
    (l.real() > 0.0 ? any_pos : any_neg) = true;
  }
  if (any_pos && any_neg) return Stability::saddle;
  return any_pos ? Stability::unstable : Stability::stable;
}

template <std::size_t N>
using Matrix = Eigen::Matrix<double, static_cast<int>(N), static_cast<int>(N)>;

/// Central finite-difference Jacobian, h = 1e-6 max(1, |x_j|).
template <std::size_t N, class F>
Matrix<N> jacobian_fd(const F& f, const State<N>& s) {
  Matrix<N> J;
  for (std::size_t j = 0; j < N; ++j) {
    const double h = 1e-6 * std::max(1.0, std::fabs(s[j]));
    State<N> up = s, dn = s;
    up[j] += h;
    dn[j] -= h;
    const State<N> d = (f(up) - f(dn)) * (1.0 / (2.0 * h));
    for (std::size_t i = 0; i < N; ++i) J(static_cast<int>(i), static_cast<int>(j)) = d[i];
  }
  return J;
}

template <std::size_t N>
struct Linearization {
  Matrix<N> jacobian;
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by decreasing real part
  Stability stability = Stability::marginal;
  /// Real eigenvector of the leading eigenvalue when that eigenvalue is real
  /// and positive (unit length).
  std::optional<State<N>> unstable_direction;

  double max_real() const { return eigenvalues.front().real(); }
};

template <std::size_t N>
Linearization<N> linearize(const Matrix<N>& J) {
  Eigen::EigenSolver<Matrix<N>> es(J);
  Linearization<N> lin;
  lin.jacobian = J;
  std::vector<std::size_t> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  const auto ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ev(static_cast<int>(a)).real() > ev(static_cast<int>(b)).real();
  });
  for (std::size_t i : order) lin.eigenvalues.push_back(ev(static_cast<int>(i)));
  lin.stability = stability_from(lin.eigenvalues);

  const auto top = ev(static_cast<int>(order[0]));
  if (top.real() > marginal_tolerance && top.imag() == 0.0) {
    const auto vec = es.eigenvectors().col(static_cast<int>(order[0]));
    State<N> d;
    for (std::size_t i = 0; i < N; ++i) d[i] = vec(static_cast<int>(i)).real();
    lin.unstable_direction = d * (1.0 / norm(d));
  }
  return lin;
}

/// Linearization of ds/dt = f(s) at an equilibrium. f(s) must vanish there
/// to within residual_tolerance.
template <std::size_t N, class F>
Linearization<N> classify_equilibrium(const F& f, const State<N>& point,
                                      double residual_tolerance = 1e-8) {
  const double r = norm(f(point));
  if (!(r < residual_tolerance))
    throw ResidualTooLarge("residual " + std::to_string(r) + " at candidate equilibrium exceeds " +
                           std::to_string(residual_tolerance));
  return linearize<N>(jacobian_fd<N>(f, point));
}

template <std::size_t N>
struct EquilibriumReport {
  State<N> point{};
  Family family = Family::numeric;
  Stability stability = Stability::marginal;
  std::vector<std::complex<double>> eigenvalues;
  std::optional<State<N>> unstable_direction;
  double residual = 0.0;

  double max_real() const { return eigenvalues.front().real(); }
};

template <std::size_t N>
struct EquilibriumSet {
  std::vector<EquilibriumReport<N>> points;
  std::size_t complex_roots_omitted = 0;
  std::size_t newton_seeds = 0;
  std::size_t newton_divergences = 0;

  std::size_t count(Stability s) const {
    return static_cast<std::size_t>(std::count_if(
        points.begin(), points.end(), [s](const auto& e) { return e.stability == s; }));
  }
};

/// Real roots of x^2 + b x + c = 0 (ascending), by the cancellation-free
/// formula. Empty when the discriminant is negative.
inline std::vector<double> monic_quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r;
  if (q == 0.0) {
    r = {0.0, 0.0};
  } else {
    r = {q, c / q};
  }
  std::sort(r.begin(), r.end());
  return r;
}

template <std::size_t N>
struct NewtonResult {
  State<N> point{};
  bool converged = false;
  std::size_t iterations = 0;
};

/// Newton iteration on f(s) = 0 with the finite-difference Jacobian.
template <std::size_t N, class F>
NewtonResult<N> newton_solve(const F& f, State<N> s, std::size_t max_iterations = 50,
                             double tolerance = 1e-13) {
  NewtonResult<N> res;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const State<N> r = f(s);
    if (!all_finite(r)) return res;
    if (norm(r) < tolerance) {
      res = {s, true, it};
      return res;
    }
    const Matrix<N> J = jacobian_fd<N>(f, s);
    Eigen::Matrix<double, static_cast<int>(N), 1> rhs;
    for (std::size_t i = 0; i < N; ++i) rhs(static_cast<int>(i)) = -r[i];
    const auto lu = J.fullPivLu();
    if (!lu.isInvertible()) return res;
    const auto step = lu.solve(rhs);
    for (std::size_t i = 0; i < N; ++i) s[i] += step(static_cast<int>(i));
    if (!all_finite(s)) return res;
    res.iterations = it + 1;
  }
  res.point = s;
  res.converged = all_finite(s) && norm(f(s)) < tolerance;
  return res;
}

namespace detail {

template <std::size_t N, class F>
void add_equilibrium(EquilibriumSet<N>& set, const F& f, const State<N>& point, Family family) {
  const auto lin = classify_equilibrium<N>(f, point);
  EquilibriumReport<N> rep;
  rep.point = point;
  rep.family = family;
  rep.stability = lin.stability;
  rep.eigenvalues = lin.eigenvalues;
  rep.unstable_direction = lin.unstable_direction;
  rep.residual = norm(f(point));
  set.points.push_back(std::move(rep));
}

}  // namespace detail

/// Origin, (0, y0), the real horizontal-axis roots and the real
/// intersections of the parabola and line nullclines of the two-variable
/// model, each classified.
inline EquilibriumSet<2> equilibria_two_var(const TwoVarParams& p) {
  p.validate();
  auto f = [&p](const State2& s) { return rhs_two_var(s, p); };
  EquilibriumSet<2> set;
  detail::add_equilibrium<2>(set, f, State2{0.0, 0.0}, Family::origin);
  detail::add_equilibrium<2>(set, f, State2{0.0, p.y0}, Family::axis_y);

  // (1-x)(x-alpha) - beta1 y0 = 0
  const auto axis = monic_quadratic_roots(-(1.0 + p.alpha), p.alpha + p.beta1 * p.y0);
  if (axis.empty()) set.complex_roots_omitted += 2;
  for (double x : axis) detail::add_equilibrium<2>(set, f, State2{x, 0.0}, Family::axis_x_pair);

  // y = y0 + beta2 x into the parabola: (1-x)(x-alpha) + beta1 beta2 x = 0
  const auto inner = monic_quadratic_roots(-(1.0 + p.alpha + p.beta1 * p.beta2), p.alpha);
  if (inner.empty()) set.complex_roots_omitted += 2;
  for (double x : inner)
    detail::add_equilibrium<2>(set, f, State2{x, p.y0 + p.beta2 * x}, Family::interior);
  return set;
}

struct NewtonSearch {
  std::size_t seeds_per_axis = 20;
  double lo = 0.0;
  double hi = 1.2;
  std::size_t max_iterations = 50;
  double merge_radius = 1e-6;
};

/// Closed-form x = 0 steady states (all real members of each family, kept
/// even when two families coincide) plus x > 0 states found by Newton from
/// a seed grid.
inline EquilibriumSet<3> equilibria_three_var(const ThreeVarParams& p,
                                              const NewtonSearch& search = {}) {
  p.validate();
  auto f = [&p](const State3& s) { return rhs_three_var(s, p); };
  EquilibriumSet<3> set;
  detail::add_equilibrium<3>(set, f, State3{0.0, 0.0, 0.0}, Family::origin);

  // z = 0: y0 - y - beta23 z0 = 0
  detail::add_equilibrium<3>(set, f, State3{0.0, p.y0 - p.beta23 * p.z0, 0.0}, Family::x2_family);

  // y, z != 0: y = y0 + beta23 (z - z0) and (z0 - z)(z - alpha2 - beta23 beta32) = 0
  for (double z : {p.alpha2 + p.beta23 * p.beta32, p.z0})
    detail::add_equilibrium<3>(set, f, State3{0.0, p.y0 + p.beta23 * (z - p.z0), z},
                               Family::x34_family);

  // y = 0: (z0 - z)(z - alpha2) - beta32 y0 = 0
  const auto zs = monic_quadratic_roots(-(p.z0 + p.alpha2), p.z0 * p.alpha2 + p.beta32 * p.y0);
  if (zs.empty()) set.complex_roots_omitted += 2;
  for (auto it = zs.rbegin(); it != zs.rend(); ++it)
    detail::add_equilibrium<3>(set, f, State3{0.0, 0.0, *it}, Family::x56_family);

  const std::size_t m = std::max<std::size_t>(search.seeds_per_axis, 2);
  std::vector<State3> found;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        auto at = [&](std::size_t q) {
          return search.lo + (search.hi - search.lo) * static_cast<double>(q) /
                                 static_cast<double>(m - 1);
        };
        ++set.newton_seeds;
        const auto res = newton_solve<3>(f, State3{at(i), at(j), at(k)}, search.max_iterations);
        if (!res.converged) {
          ++set.newton_divergences;
          continue;
        }
        if (!(res.point[0] > 1e-9)) continue;
        const bool dup = std::any_of(found.begin(), found.end(), [&](const State3& q) {
          return norm(q - res.point) < search.merge_radius;
        });
        if (!dup) found.push_back(res.point);
      }
  std::sort(found.begin(), found.end(), [](const State3& a, const State3& b) { return a.v < b.v; });
  for (const auto& q : found) detail::add_equilibrium<3>(set, f, q, Family::numeric);
  return set;
}

}  // namespace ethnokinetics

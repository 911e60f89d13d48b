#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "brownian.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "sde.hpp"

// Constructive pieces of the existence argument for the stochastic model:
// inward-pointing prisms, the growing prism sequence, and the Brownian range
// tail bound that fixes the growth step k.

namespace ethnokinetics {

// ---------------------------------------------------------------------------
// Gaussian tail

namespace detail {

inline double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
template <class F>
double integrate_simpson(const F& f, double a, double b, double tol = 1e-14, int max_depth = 50) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return detail::adaptive_simpson(f, a, b, fa, fm, fb, detail::simpson(fa, fm, fb, a, b), tol,
                                  max_depth);
}

/// P(N(0,1) >= d), by quadrature of the density on [d, d + 12]; the
/// neglected remainder is below 1e-30.
inline double gaussian_tail(double d) {
  constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  if (d < 0.0) return 1.0 - gaussian_tail(-d);
  auto phi = [](double y) { return inv_sqrt_2pi * std::exp(-0.5 * y * y); };
  // Unit pieces, each with a tolerance relative to its own size.
  double total = 0.0;
  for (double lo = d; lo < d + 12.0; lo += 1.0)
    total += integrate_simpson(phi, lo, lo + 1.0, 1e-13 * phi(lo) + 1e-300);
  return total;
}

/// Reflection-principle bound on P(sup_{[0,tau]} W >= a or inf W <= -a),
/// i.e. 4 P(W(1) >= a / sqrt(tau)). Exceeds 1 (vacuous) for small a.
inline double brownian_range_tail_bound(double a, double tau) {
  if (!(a > 0.0)) throw ValidationError("a", "must be positive");
  if (!(tau > 0.0)) throw ValidationError("tau", "must be positive");
  return 4.0 * gaussian_tail(a / std::sqrt(tau));
}

struct RangeBoundResult {
  double level = 0.0;
  double empirical = 0.0;  ///< fraction of simulated paths whose range hit +-level
  double analytic = 0.0;
  std::size_t samples = 0;

  /// Binomial standard error of the empirical estimate.
  double standard_error() const {
    return std::sqrt(empirical * (1.0 - empirical) / static_cast<double>(samples));
  }
};

/// Monte Carlo estimate of the range probability for several levels at once,
/// all levels sharing the same n_samples discretised paths on [0, tau].
/// Path i uses seed derive_seed(seed, i), so results do not depend on the
/// worker count.
inline std::vector<RangeBoundResult> brownian_range_bounds(std::span<const double> levels,
                                                           double tau, std::size_t n_samples,
                                                           std::uint64_t seed, double dt,
                                                           unsigned workers = 1) {
  if (!(tau > 0.0)) throw ValidationError("tau", "must be positive");
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (n_samples == 0) throw ValidationError("n_samples", "must be >= 1");
  for (double a : levels)
    if (!(a > 0.0)) throw ValidationError("a", "must be positive");

  const TimeGrid grid(0.0, tau, dt);
  const std::size_t steps = grid.steps();
  const double sd = std::sqrt(tau / static_cast<double>(steps));

  std::vector<double> sup(n_samples), inf(n_samples);
  detail::parallel_for(n_samples, workers, [&](std::size_t i) {
    NormalStream normal(derive_seed(seed, i));
    double w = 0.0, hi = 0.0, lo = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
      w += sd * normal();
      hi = std::max(hi, w);
      lo = std::min(lo, w);
    }
    sup[i] = hi;
    inf[i] = lo;
  });

  std::vector<RangeBoundResult> out;
  for (double a : levels) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_samples; ++i)
      if (sup[i] >= a || inf[i] <= -a) ++hits;
    out.push_back({a, static_cast<double>(hits) / static_cast<double>(n_samples),
                   brownian_range_tail_bound(a, tau), n_samples});
  }
  return out;
}

inline RangeBoundResult brownian_range_bound(double a, double tau, std::size_t n_samples,
                                             std::uint64_t seed, double dt = 1e-4,
                                             unsigned workers = 1) {
  const double levels[] = {a};
  return brownian_range_bounds(levels, tau, n_samples, seed, dt, workers).front();
}

/// Smallest growth step k (to 1e-6) for which a single Brownian component
/// with volatility sigma_max exits a log-width-k slab within tau with
/// probability bound below 1/3: 4 P(N >= k / (2 sigma sqrt(tau))) < 1/3.
inline double min_k_for_tau(double tau, double sigma_max) {
  if (!(tau > 0.0)) throw ValidationError("tau", "must be positive");
  if (!(sigma_max > 0.0)) throw ValidationError("sigma_max", "must be positive");
  const double scale = 2.0 * sigma_max * std::sqrt(tau);
  auto ok = [&](double k) { return 4.0 * gaussian_tail(k / scale) < 1.0 / 3.0; };
  double lo = 0.0, hi = scale;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Prisms

/// Box (0, a] x (0, b] x (0, c] in population coordinates.
struct Prism {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  bool strictly_contains(const State3& s) const {
    return s[0] > 0.0 && s[0] < a && s[1] > 0.0 && s[1] < b && s[2] > 0.0 && s[2] < c;
  }
  bool contains(const State3& s) const {
    return s[0] > 0.0 && s[0] <= a && s[1] > 0.0 && s[1] <= b && s[2] > 0.0 && s[2] <= c;
  }
  friend bool operator==(const Prism&, const Prism&) = default;
};

/// y0 + beta21 a + beta23 (c - z0): the y-facet b must lie strictly above it.
inline double y_facet_floor(const ThreeVarParams& p, double a, double c) {
  return p.y0 + p.beta21 * a + p.beta23 * (c - p.z0);
}

enum class Facet { x, y, z };

inline const char* to_string(Facet f) {
  switch (f) {
    case Facet::x: return "x";
    case Facet::y: return "y";
    case Facet::z: return "z";
  }
  return "?";
}

struct FacetVerdict {
  Facet facet = Facet::x;
  bool pass = false;
  double worst = 0.0;  ///< supremum of the bracket over the sampled facet
  State3 worst_at{};   ///< zeros stand for the limit 0+
};

struct PrismVerdict {
  std::array<FacetVerdict, 3> facets;
  bool pass() const {
    return std::all_of(facets.begin(), facets.end(), [](const auto& f) { return f.pass; });
  }
};

namespace detail {

/// n points on [lo, hi] including both ends (lo = 0 stands for the limit 0+).
inline double sample(double lo, double hi, std::size_t j, std::size_t n) {
  if (n <= 1) return hi;
  return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
}

template <class Bracket>
FacetVerdict scan_box(Facet facet, const Bracket& bracket, std::array<double, 2> xr,
                      std::array<double, 2> yr, std::array<double, 2> zr,
                      std::array<std::size_t, 3> counts) {
  FacetVerdict v{facet, false, -INFINITY, {}};
  for (std::size_t i = 0; i < counts[0]; ++i) {
    const double x = sample(xr[0], xr[1], i, counts[0]);
    for (std::size_t j = 0; j < counts[1]; ++j) {
      const double y = sample(yr[0], yr[1], j, counts[1]);
      for (std::size_t k = 0; k < counts[2]; ++k) {
        const double z = sample(zr[0], zr[1], k, counts[2]);
        const double b = bracket(x, y, z);
        if (b > v.worst) {
          v.worst = b;
          v.worst_at = State3{x, y, z};
        }
      }
    }
  }
  v.pass = v.worst < 0.0;
  return v;
}

}  // namespace detail

/// Checks that the drift points inward on the three outer facets of the
/// prism. On the x- and z-facets the unbounded y-direction is reduced to
/// its supremum y -> 0+ (valid since beta12, beta32 <= 0); the remaining
/// coordinates are sampled on the closed facet with samples_per_facet
/// points per axis.
inline PrismVerdict prism_drift_check(const ThreeVarParams& p, const Prism& prism,
                                      std::size_t samples_per_facet = 200) {
  require_stochastic_signs(p);
  const std::size_t n = std::max<std::size_t>(samples_per_facet, 2);
  using B = ThreeVarBrackets;
  PrismVerdict v;
  v.facets[0] = detail::scan_box(
      Facet::x, [&](double x, double y, double z) { return B::x(p, x, y, z); }, {prism.a, prism.a},
      {0.0, 0.0}, {0.0, prism.c}, {1, 1, n});
  v.facets[1] = detail::scan_box(
      Facet::y, [&](double x, double y, double z) { return B::y(p, x, y, z); }, {0.0, prism.a},
      {prism.b, prism.b}, {0.0, prism.c}, {n, 1, n});
  v.facets[2] = detail::scan_box(
      Facet::z, [&](double x, double y, double z) { return B::z(p, x, y, z); }, {0.0, prism.a},
      {0.0, 0.0}, {prism.c, prism.c}, {n, 1, 1});
  return v;
}

struct PrismSequence {
  double k = 0.0;
  std::vector<Prism> prisms;
  State3 origin_state{};
};

struct PrismBuildOptions {
  double scan_factor = 1.05;    ///< multiplicative step of the a0 = c0 scan
  double scan_ceiling = 1e6;
  std::size_t curve_samples = 1000;
  double b_margin = 0.05;       ///< relative clearance of b above its floor
};

namespace detail {

inline double strictly_above(double v, double margin) {
  return v + margin * std::max(1.0, std::fabs(v));
}

/// Whether a0 = c0 = s admits the first slab pair: the x-bracket negative on
/// [s, s e^k] with z up to c1 = s e^k, and the z-bracket negative on
/// [s, s e^k] with x up to a1 = s e^k (y -> 0+ in both). For beta13 > 0 this
/// is the condition that s lies below the e^k-expanded parabolas.
inline bool base_admissible(const ThreeVarParams& p, double s, double k, std::size_t samples) {
  using B = ThreeVarBrackets;
  const double s1 = s * std::exp(k);
  for (std::size_t j = 0; j < samples; ++j) {
    const double u = sample(s, s1, j, samples);
    if (std::max(B::x(p, u, 0.0, 0.0), B::x(p, u, 0.0, s1)) >= 0.0) return false;
    if (std::max(B::z(p, 0.0, 0.0, u), B::z(p, s1, 0.0, u)) >= 0.0) return false;
  }
  return true;
}

}  // namespace detail

/// Builds prisms 0..n-1 with a_i = a_{i-1} e^k, c_i = c_{i-1} e^k and
/// b_i = max(floor(a_{i+1}, c_{i+1}) + margin, b_{i-1} e^k); prism 0 strictly
/// contains the initial state.
inline PrismSequence build_prism_sequence(const ThreeVarParams& p, double k, std::size_t n,
                                          const State3& initial,
                                          const PrismBuildOptions& opt = {}) {
  p.validate();
  require_stochastic_signs(p);
  if (!(k > 0.0)) throw ValidationError("k", "must be positive");
  if (n == 0) throw ValidationError("n", "need at least one prism");
  for (std::size_t i = 0; i < 3; ++i)
    if (!(initial[i] > 0.0)) throw ValidationError("initial", "must be strictly positive");

  double s = std::max({1.0, initial[0], initial[2]}) * (1.0 + 1e-9) + 1e-9;
  while (!detail::base_admissible(p, s, k, opt.curve_samples)) {
    s *= opt.scan_factor;
    if (s > opt.scan_ceiling)
      throw NoValidBase("no a0 = c0 <= " + std::to_string(opt.scan_ceiling) +
                        " satisfies the expanded-parabola inequalities");
  }

  const double growth = std::exp(k);
  std::vector<double> ac(n + 1);
  ac[0] = s;
  for (std::size_t i = 1; i <= n; ++i) ac[i] = ac[i - 1] * growth;

  PrismSequence seq{k, {}, initial};
  double b = detail::strictly_above(
      std::max({1.0, y_facet_floor(p, ac[1], ac[1]), initial[1]}), opt.b_margin);
  seq.prisms.push_back({ac[0], b, ac[0]});
  for (std::size_t i = 1; i < n; ++i) {
    b = std::max(detail::strictly_above(y_facet_floor(p, ac[i + 1], ac[i + 1]), opt.b_margin),
                 b * growth);
    seq.prisms.push_back({ac[i], b, ac[i]});
  }
  return seq;
}

/// Worst bracket values on the three slabs between prism i-1 and prism i.
struct SlabVerdict {
  std::size_t index = 0;  ///< i >= 1
  std::array<FacetVerdict, 3> slabs;
  bool growth_ok = false;  ///< a_i >= a_{i-1} e^k, same for b and c
  bool pass() const {
    return growth_ok &&
           std::all_of(slabs.begin(), slabs.end(), [](const auto& f) { return f.pass; });
  }
};

struct SequenceVerdict {
  bool base_contains_initial = false;
  std::vector<PrismVerdict> prisms;
  std::vector<SlabVerdict> slabs;
  bool pass() const {
    return base_contains_initial &&
           std::all_of(prisms.begin(), prisms.end(), [](const auto& v) { return v.pass(); }) &&
           std::all_of(slabs.begin(), slabs.end(), [](const auto& v) { return v.pass(); });
  }
};

/// Samples every slab of the sequence at resolution^3 points (closed
/// intervals, 0 standing for the limit 0+) and checks the growth ratios.
inline SequenceVerdict verify_prism_sequence(const ThreeVarParams& p, const PrismSequence& seq,
                                             std::size_t resolution = 50) {
  require_stochastic_signs(p);
  using B = ThreeVarBrackets;
  const std::size_t r = std::max<std::size_t>(resolution, 2);
  SequenceVerdict out;
  out.base_contains_initial = !seq.prisms.empty() && seq.prisms[0].strictly_contains(seq.origin_state);
  for (const auto& pr : seq.prisms) out.prisms.push_back(prism_drift_check(p, pr, r));

  const double growth = std::exp(seq.k);
  for (std::size_t i = 1; i < seq.prisms.size(); ++i) {
    const Prism& lo = seq.prisms[i - 1];
    const Prism& hi = seq.prisms[i];
    SlabVerdict v;
    v.index = i;
    // Relative slack of a few ulps: a_i = a_{i-1} e^k is computed, not exact.
    const double eps = 1e-14;
    v.growth_ok = hi.a >= lo.a * growth * (1 - eps) && hi.b >= lo.b * growth * (1 - eps) &&
                  hi.c >= lo.c * growth * (1 - eps);
    v.slabs[0] = detail::scan_box(
        Facet::x, [&](double x, double y, double z) { return B::x(p, x, y, z); }, {lo.a, hi.a},
        {0.0, hi.b}, {0.0, hi.c}, {r, r, r});
    v.slabs[1] = detail::scan_box(
        Facet::y, [&](double x, double y, double z) { return B::y(p, x, y, z); }, {0.0, hi.a},
        {lo.b, hi.b}, {0.0, hi.c}, {r, r, r});
    v.slabs[2] = detail::scan_box(
        Facet::z, [&](double x, double y, double z) { return B::z(p, x, y, z); }, {0.0, hi.a},
        {0.0, hi.b}, {lo.c, hi.c}, {r, r, r});
    out.slabs.push_back(v);
  }
  return out;
}

/// Prism with a and c given and b re-derived strictly above its floor.
inline Prism prism_with_derived_b(const ThreeVarParams& p, double a, double c,
                                  double margin = 0.05) {
  return {a, detail::strictly_above(std::max(1.0, y_facet_floor(p, a, c)), margin), c};
}

}  // namespace ethnokinetics

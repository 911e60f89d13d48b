#pragma once

#include <cmath>

#include "params.hpp"
#include "state.hpp"

// Right-hand sides of every model. All functions here are pure; the
// multiplicative structure x*[...] keeps each coordinate hyperplane invariant.

namespace ethnokinetics {

/// Square brackets of the three-variable model, i.e. the per-capita growth
/// rates before the gamma factors. The prism checks and the log-space drift
/// both evaluate these directly.
struct ThreeVarBrackets {
  static double x(const ThreeVarParams& p, double x, double y, double z) {
    return (1.0 - x) * (x - p.alpha1) + p.beta12 * (y - p.y0) + p.beta13 * (z - p.z0);
  }
  static double y(const ThreeVarParams& p, double x, double y, double z) {
    return p.y0 - y + p.beta21 * x + p.beta23 * (z - p.z0);
  }
  static double z(const ThreeVarParams& p, double x, double y, double z) {
    return (p.z0 - z) * (z - p.alpha2) + p.beta31 * x + p.beta32 * (y - p.y0);
  }
};

inline State2 rhs_lotka_volterra(const State2& s, const LVParams& p) {
  const double x = s[0], y = s[1];
  return {x * (1.0 - x + p.beta1 * y), p.gamma * y * (1.0 - y + p.beta2 * x)};
}

inline State2 rhs_two_var(const State2& s, const TwoVarParams& p) {
  const double x = s[0], y = s[1];
  return {x * ((1.0 - x) * (x - p.alpha) + p.beta1 * (y - p.y0)),
          p.gamma * y * (p.y0 - y + p.beta2 * x)};
}

inline State3 rhs_three_var(const State3& s, const ThreeVarParams& p) {
  const double x = s[0], y = s[1], z = s[2];
  return {p.gamma1 * x * ThreeVarBrackets::x(p, x, y, z),
          p.gamma2 * y * ThreeVarBrackets::y(p, x, y, z),
          p.gamma3 * z * ThreeVarBrackets::z(p, x, y, z)};
}

/// Drift in log coordinates v = ln(x, y, z). No Ito correction: the noise is
/// additive in these coordinates.
inline LogState3 drift_log_three_var(const LogState3& v, const ThreeVarParams& p) {
  const double x = std::exp(v[0]), y = std::exp(v[1]), z = std::exp(v[2]);
  return {p.gamma1 * ThreeVarBrackets::x(p, x, y, z),
          p.gamma2 * ThreeVarBrackets::y(p, x, y, z),
          p.gamma3 * ThreeVarBrackets::z(p, x, y, z)};
}

/// Drift of the stochastic model written directly in population
/// coordinates: X (gamma1 [...] + sigma1^2 / 2) and likewise for Y, Z.
inline State3 drift_direct_three_var(const State3& s, const ThreeVarParams& p,
                                     const NoiseSpec& n) {
  const double x = s[0], y = s[1], z = s[2];
  return {x * (p.gamma1 * ThreeVarBrackets::x(p, x, y, z) + 0.5 * n.sigma1 * n.sigma1),
          y * (p.gamma2 * ThreeVarBrackets::y(p, x, y, z) + 0.5 * n.sigma2 * n.sigma2),
          z * (p.gamma3 * ThreeVarBrackets::z(p, x, y, z) + 0.5 * n.sigma3 * n.sigma3)};
}

/// Time gates of the coupled system at time t.
struct InteractionGates {
  bool second_alive;  ///< t >= T1
  bool coupled;       ///< t >= T1 + T2

  static InteractionGates at(const InteractionSpec& i, double t) {
    return {t >= i.T1, t >= i.onset()};
  }
};

/// Drift of the six-equation coupled system in population coordinates,
/// state ordered (x1, y1, z1, x2, y2, z2). Ethnos 2 is identically frozen
/// before T1; the passionary cross-suppression gamma1 c X_other enters the
/// x-brackets from T1 + T2 on.
inline State6 drift_interaction(const State6& s, const ThreeVarParams& p, const InteractionSpec& i,
                                const NoiseSpec& n, double t) {
  const auto gates = InteractionGates::at(i, t);
  const State3 first{s[0], s[1], s[2]};
  const State3 second{s[3], s[4], s[5]};

  State3 d1 = drift_direct_three_var(first, p, n);
  if (gates.coupled) d1[0] -= p.gamma1 * i.c1 * s[0] * s[3];

  State6 out{d1[0], d1[1], d1[2], 0.0, 0.0, 0.0};
  if (gates.second_alive) {
    State3 d2 = drift_direct_three_var(second, p, n);
    if (gates.coupled) d2[0] -= p.gamma1 * i.c2 * s[3] * s[0];
    out[3] = d2[0];
    out[4] = d2[1];
    out[5] = d2[2];
  }
  return out;
}

}  // namespace ethnokinetics

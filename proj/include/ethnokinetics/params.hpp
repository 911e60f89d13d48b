#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "errors.hpp"

namespace ethnokinetics {

namespace detail {

inline void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

inline bool finite(double x) { return std::isfinite(x); }

}  // namespace detail

/// Nondimensional Lotka-Volterra coefficients.
struct LVParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma = 1.0;

  void validate() const {
    detail::require(detail::finite(beta1), "beta1", "must be finite");
    detail::require(detail::finite(beta2), "beta2", "must be finite");
    detail::require(gamma > 0.0 && detail::finite(gamma), "gamma", "must be positive");
  }
  friend bool operator==(const LVParams&, const LVParams&) = default;
};

/// Two-variable excitable model: passionaries x, the rest of the population y.
struct TwoVarParams {
  double alpha = 0.02;  ///< excitation threshold
  double y0 = 0.05;     ///< rest level of y
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma = 0.1;

  void validate() const {
    detail::require(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0,1)");
    detail::require(y0 > 0.0 && detail::finite(y0), "y0", "must be positive");
    detail::require(detail::finite(beta1), "beta1", "must be finite");
    detail::require(detail::finite(beta2), "beta2", "must be finite");
    detail::require(gamma > 0.0 && detail::finite(gamma), "gamma", "must be positive");
  }
  friend bool operator==(const TwoVarParams&, const TwoVarParams&) = default;
};

/// Three-variable model: passionaries x, harmonious y, subpassionaries z.
/// Deterministic integration accepts any coupling signs; the stochastic and
/// prism code additionally calls require_stochastic_signs().
struct ThreeVarParams {
  double alpha1 = 0.03;
  double alpha2 = 0.11;
  double y0 = 0.075;
  double z0 = 0.22;
  double beta12 = 0.0;
  double beta13 = 0.0;
  double beta21 = 0.0;
  double beta23 = 0.0;
  double beta31 = 0.0;
  double beta32 = 0.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma3 = 1.0;

  void validate() const {
    detail::require(alpha1 > 0.0 && detail::finite(alpha1), "alpha1", "must be positive");
    detail::require(alpha2 > 0.0 && detail::finite(alpha2), "alpha2", "must be positive");
    detail::require(y0 > 0.0 && detail::finite(y0), "y0", "must be positive");
    detail::require(z0 >= 0.0 && detail::finite(z0), "z0", "must be non-negative");
    for (auto [v, name] : {std::pair{beta12, "beta12"}, {beta13, "beta13"}, {beta21, "beta21"},
                           {beta23, "beta23"}, {beta31, "beta31"}, {beta32, "beta32"}})
      detail::require(detail::finite(v), name, "must be finite");
    detail::require(gamma1 > 0.0 && detail::finite(gamma1), "gamma1", "must be positive");
    detail::require(gamma2 > 0.0 && detail::finite(gamma2), "gamma2", "must be positive");
    detail::require(gamma3 > 0.0 && detail::finite(gamma3), "gamma3", "must be positive");
  }
  friend bool operator==(const ThreeVarParams&, const ThreeVarParams&) = default;
};

inline void require_stochastic_signs(const ThreeVarParams& p) {
  if (p.beta12 > 0.0)
    throw ParamSignViolation("beta12 must be <= 0 for the stochastic model (got " +
                             std::to_string(p.beta12) + ")");
  if (p.beta32 > 0.0)
    throw ParamSignViolation("beta32 must be <= 0 for the stochastic model (got " +
                             std::to_string(p.beta32) + ")");
}

/// Diagonal multiplicative noise. The same three volatilities drive both
/// ethnoses of the interacting system.
struct NoiseSpec {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;
  std::uint64_t seed = 0;

  double sigma(std::size_t i) const { return i == 0 ? sigma1 : i == 1 ? sigma2 : sigma3; }
  double max_sigma() const { return std::fmax(sigma1, std::fmax(sigma2, sigma3)); }

  void validate() const {
    detail::require(sigma1 >= 0.0 && detail::finite(sigma1), "sigma1", "must be >= 0");
    detail::require(sigma2 >= 0.0 && detail::finite(sigma2), "sigma2", "must be >= 0");
    detail::require(sigma3 >= 0.0 && detail::finite(sigma3), "sigma3", "must be >= 0");
  }
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Coupling of two ethnoses: mutual suppression of passionaries, the
/// second ethnos appears at T1 and communication starts at T1 + T2.
struct InteractionSpec {
  double c1 = 0.22;
  double c2 = 0.22;
  double T1 = 30.0;
  double T2 = 5.0;

  double onset() const { return T1 + T2; }

  /// c1 = c2 = 0 is accepted for the uncoupled reference runs.
  void validate() const {
    detail::require(c1 >= 0.0 && detail::finite(c1), "c1", "must be >= 0");
    detail::require(c2 >= 0.0 && detail::finite(c2), "c2", "must be >= 0");
    detail::require(T1 >= 0.0 && detail::finite(T1), "T1", "must be >= 0");
    detail::require(T2 >= 0.0 && detail::finite(T2), "T2", "must be >= 0");
  }
  friend bool operator==(const InteractionSpec&, const InteractionSpec&) = default;
};

}  // namespace ethnokinetics

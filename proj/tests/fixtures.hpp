#pragma once

#include <cmath>
#include <random>

#include "ethnokinetics/params.hpp"

// Reference parameter sets, typed in again here so the preset table in the
// library is checked against an independent copy.

namespace fixtures {

inline ethnokinetics::TwoVarParams fig2() { return {0.02, 0.05, -1.0 / 3.0, 2.5, 0.1}; }
inline ethnokinetics::TwoVarParams fig3() { return {0.02, 1.0, 1.0 / 3.0, -2.5, 0.1}; }

inline ethnokinetics::ThreeVarParams fig4() {
  return {0.03, 0.11, 0.075, 0.22, -6.0, 0.6, 0.2, 0.1, 0.5, 0.0, 1.0, 0.7, 0.2};
}

inline ethnokinetics::ThreeVarParams fig5() {
  auto p = fig4();
  p.z0 = 0.0;
  return p;
}

inline ethnokinetics::ThreeVarParams fig6() {
  return {0.03, 0.1, 0.075, 0.6, -0.06, 0.6, 1.25, -0.075, -0.5, 0.0, 2.0, 20.0, 0.6};
}

// P(N(0,1) >= d) through erfc, an independent route to the tail.
inline double normal_tail(double d) { return 0.5 * std::erfc(d / std::sqrt(2.0)); }

}  // namespace fixtures

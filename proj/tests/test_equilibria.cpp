#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "ethnokinetics/equilibria.hpp"
#include "ethnokinetics/integrate.hpp"
#include "fixtures.hpp"

using namespace ethnokinetics;

namespace {

// plain bisection on a sign change
template <class F>
double bisect(const F& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <std::size_t N>
const EquilibriumReport<N>* find(const EquilibriumSet<N>& set, const State<N>& q, double tol) {
  for (const auto& e : set.points)
    if (max_abs_diff(e.point, q) < tol) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("two-variable equilibria") {
  const auto p = fixtures::fig2();
  const auto set = equilibria_two_var(p);

  const auto* origin = find<2>(set, {0.0, 0.0}, 1e-12);
  REQUIRE(origin);
  CHECK(origin->stability == Stability::saddle);
  const auto* rest = find<2>(set, {0.0, 0.05}, 1e-12);
  REQUIRE(rest);
  CHECK(rest->stability == Stability::stable);

  auto axis = [&](double x) { return (1 - x) * (x - p.alpha) + p.beta1 * (0 - p.y0); };
  const double r1 = bisect(axis, 0.0, 0.5), r2 = bisect(axis, 0.5, 2.0);
  CHECK(r1 == Catch::Approx(0.00328).margin(1e-5));
  CHECK(r2 == Catch::Approx(1.01672).margin(1e-5));
  REQUIRE(find<2>(set, {r1, 0.0}, 1e-12));
  REQUIRE(find<2>(set, {r2, 0.0}, 1e-12));

  // x^2 - (1 + alpha + beta1 beta2) x + alpha has no real root here
  const double b = 1 + p.alpha + p.beta1 * p.beta2;
  CHECK(b * b - 4 * p.alpha < 0);
  CHECK(std::none_of(set.points.begin(), set.points.end(),
                     [](const auto& e) { return e.family == Family::interior; }));
  CHECK(set.complex_roots_omitted == 2);
  CHECK(set.points.size() == 4);
}

TEST_CASE("three-variable x = 0 steady states") {
  const auto set = equilibria_three_var(fixtures::fig4());
  const std::vector<State3> listed{{0, 0, 0},       {0, 0.053, 0}, {0, 0.064, 0.11},
                                   {0, 0.075, 0.22}, {0, 0, 0.22}, {0, 0, 0.11}};
  for (const auto& q : listed) {
    const auto* e = find<3>(set, q, 1e-9);
    REQUIRE(e);
    const bool should_be_stable = q == State3{0, 0.053, 0} || q == State3{0, 0.075, 0.22};
    CHECK((e->stability == Stability::stable) == should_be_stable);
  }
  CHECK(set.count(Stability::stable) == 2);
  for (const auto& e : set.points)
    if (e.point[0] > 0.0) CHECK(e.stability != Stability::stable);
  CHECK(set.points.size() >= 6);
}

TEST_CASE("families coincide when z0 = 0") {
  const auto set = equilibria_three_var(fixtures::fig5());
  std::vector<Family> at;
  for (const auto& e : set.points)
    if (max_abs_diff(e.point, State3{0, 0.075, 0}) < 1e-12) at.push_back(e.family);
  CHECK(std::count(at.begin(), at.end(), Family::x2_family) == 1);
  CHECK(std::count(at.begin(), at.end(), Family::x34_family) == 1);
}

TEST_CASE("classification of single points") {
  const auto p2 = fixtures::fig2();
  auto f2 = [&](const State2& s) { return rhs_two_var(s, p2); };
  CHECK(classify_equilibrium<2>(f2, {0.0, 0.0}).stability == Stability::saddle);
  CHECK(classify_equilibrium<2>(f2, {0.0, 0.05}).stability == Stability::stable);
  CHECK_THROWS_AS(classify_equilibrium<2>(f2, {0.5, 0.5}), ResidualTooLarge);

  const auto p4 = fixtures::fig4();
  auto f3 = [&](const State3& s) { return rhs_three_var(s, p4); };
  CHECK(classify_equilibrium<3>(f3, {0.0, 0.075, 0.22}).stability == Stability::stable);
}

TEST_CASE("finite-difference Jacobian matches the triangular structure at (0, y0)") {
  for (const auto& p : {fixtures::fig2(), fixtures::fig3()}) {
    auto f = [&](const State2& s) { return rhs_two_var(s, p); };
    const auto lin = classify_equilibrium<2>(f, {0.0, p.y0});
    // d(xdot)/dx = -alpha, d(ydot)/dy = -gamma y0, d(xdot)/dy = 0
    std::vector<double> re{lin.eigenvalues[0].real(), lin.eigenvalues[1].real()};
    std::vector<double> expect{-p.alpha, -p.gamma * p.y0};
    std::sort(re.begin(), re.end());
    std::sort(expect.begin(), expect.end());
    CHECK(re[0] == Catch::Approx(expect[0]).margin(1e-5));
    CHECK(re[1] == Catch::Approx(expect[1]).margin(1e-5));
    CHECK(std::fabs(lin.jacobian(0, 1)) < 1e-9);
  }
}

TEST_CASE("tolerance rule") {
  using C = std::complex<double>;
  CHECK(stability_from({C(-1, 0), C(-2, 0)}) == Stability::stable);
  CHECK(stability_from({C(1, 0), C(2, 0)}) == Stability::unstable);
  CHECK(stability_from({C(1, 0), C(-2, 0)}) == Stability::saddle);
  CHECK(stability_from({C(5e-9, 0), C(-2, 0)}) == Stability::marginal);
  CHECK(stability_from({C(-0.1, 3), C(-0.1, -3)}) == Stability::stable);
}

TEST_CASE("reported equilibria have tiny residuals and are Newton fixed points") {
  for (const auto& p : {fixtures::fig4(), fixtures::fig5(), fixtures::fig6()}) {
    auto f = [&](const State3& s) { return rhs_three_var(s, p); };
    for (const auto& e : equilibria_three_var(p).points) {
      CHECK(norm(rhs_three_var(e.point, p)) < 1e-10);
      const auto r = newton_solve<3>(f, e.point);
      REQUIRE(r.converged);
      CHECK(norm(r.point - e.point) < 1e-9);
    }
  }
  for (const auto& p : {fixtures::fig2(), fixtures::fig3()})
    for (const auto& e : equilibria_two_var(p).points) CHECK(norm(rhs_two_var(e.point, p)) < 1e-10);
}

TEST_CASE("linear stability predicts the flow") {
  const auto p = fixtures::fig4();
  auto rhs = [&](double, const State3& s) { return rhs_three_var(s, p); };
  const TimeGrid g(0.0, 500.0, 1e-2);
  for (const auto& e : equilibria_three_var(p).points) {
    if (e.stability == Stability::stable) {
      const auto tr = integrate_ode<3>(rhs, e.point + State3{1e-4, 1e-4, 1e-4} * (1 / std::sqrt(3.0)), g);
      double dev = 0.0;
      for (const auto& s : tr.samples) dev = std::max(dev, norm(s - e.point));
      CHECK(dev < 1e-2);
    } else if (e.stability == Stability::saddle && e.unstable_direction) {
      if (e.point[0] < -1e-12 || e.point[1] < -1e-12 || e.point[2] < -1e-12) continue;
      auto d = *e.unstable_direction;
      // push off the saddle without leaving the closed orthant
      bool flip = false;
      for (std::size_t k = 0; k < 3; ++k)
        if (std::fabs(e.point[k]) < 1e-9 && std::fabs(d[k]) > 1e-9) flip = d[k] < 0;
      if (flip) d = d * -1.0;
      const TimeGrid longer(0.0, std::max(500.0, 12.0 / e.max_real()), 1e-2);
      const auto tr = integrate_ode<3>(rhs, e.point + d * 1e-3, longer);
      double dev = 0.0;
      for (const auto& s : tr.samples) dev = std::max(dev, norm(s - e.point));
      CHECK(dev > 0.05);
    }
  }
}

TEST_CASE("quadratic helper") {
  const auto r = monic_quadratic_roots(-1.02, 1.0 / 300.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] * r[1] == Catch::Approx(1.0 / 300.0));
  CHECK(r[0] + r[1] == Catch::Approx(1.02));
  CHECK(monic_quadratic_roots(0.0, 1.0).empty());
}

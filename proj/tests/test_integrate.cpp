#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "ethnokinetics/prisms.hpp"
#include "ethnokinetics/equilibria.hpp"
#include "ethnokinetics/integrate.hpp"
#include "fixtures.hpp"

using namespace ethnokinetics;
using Catch::Approx;

TEST_CASE("zero right-hand side gives a constant trajectory") {
  const TimeGrid g(0.0, 5.0, 0.1);
  const State3 s0{0.1, 0.2, 0.3};
  const auto tr = integrate_ode<3>([](double, const State3&) { return State3{}; }, s0, g);
  REQUIRE(tr.size() == g.size());
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr[i] == s0);
}

TEST_CASE("RK4 reproduces an exact solution") {
  // y' = -y, y(0) = 1
  const TimeGrid g(0.0, 2.0, 0.01);
  const auto tr = integrate_ode<2>([](double, const State2& s) { return State2{-s[0], s[0]}; },
                                   State2{1.0, 0.0}, g);
  CHECK(tr.back()[0] == Approx(std::exp(-2.0)).epsilon(1e-9));
  CHECK(tr.back()[1] == Approx(1.0 - std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("non-finite states are reported") {
  const TimeGrid g(0.0, 10.0, 0.5);
  auto blowup = [](double, const State2& s) { return State2{s[0] * s[0] * s[0], 0.0}; };
  CHECK_THROWS_AS(integrate_ode<2>(blowup, State2{10.0, 1.0}, g), NonFiniteState);
  CHECK_THROWS_AS(integrate_two_var(fixtures::fig2(), {0.0, 0.05}, g), ValidationError);
}

TEST_CASE("two-variable bust") {
  const auto tr = integrate_two_var(fixtures::fig2(), {0.1, 0.05}, TimeGrid(0.0, 200.0, 1e-3));
  const auto [xp, tp] = tr.peak(0);
  CHECK(xp > 0.9);
  CHECK(xp < 1.1);
  CHECK(tp > 12.0);
  CHECK(tp < 18.0);
}

TEST_CASE("three-variable bust and relaxation") {
  const auto p = fixtures::fig4();
  const TimeGrid g(0.0, 1000.0, 1e-3);
  const auto tr = integrate_three_var(p, {0.07, 0.053, 0.05}, g);
  const auto [xp, tp] = tr.peak(0);
  CHECK(xp > 0.45);
  CHECK(xp < 0.55);
  CHECK(norm(tr.back() - State3{0.0, 0.075, 0.22}) < 1e-2);

  const std::vector<State3> eq{{0.0, 0.053, 0.0}, {0.0, 0.075, 0.22}};
  ExcitationOptions<3> opt;
  opt.excitation_level = 0.3;
  opt.settle_tolerance = 1e-2;
  opt.equilibria = eq;
  const auto rep = detect_excitation(tr, opt);
  CHECK(rep.excited);
  CHECK(rep.peak_value == xp);
  CHECK(rep.peak_time == tp);
  CHECK(rep.spike_duration > 0.0);
  REQUIRE(rep.terminal_attractor);
  CHECK(*rep.terminal_attractor == 1);
}

TEST_CASE("sub-threshold push returns quickly") {
  const auto p = fixtures::fig4();
  const auto tr = integrate_three_var(p, {0.04, 0.053, 0.05}, TimeGrid(0.0, 1000.0, 1e-3));
  const std::vector<State3> eq{{0.0, 0.053, 0.0}, {0.0, 0.075, 0.22}};
  ExcitationOptions<3> opt;
  opt.excitation_level = default_excitation_level(0.04, p.alpha1);
  opt.settle_tolerance = 1e-2;
  opt.equilibria = eq;
  const auto rep = detect_excitation(tr, opt);
  CHECK_FALSE(rep.excited);
  REQUIRE(rep.terminal_attractor);
  CHECK(*rep.terminal_attractor == 0);
}

TEST_CASE("constant trajectory is not excited") {
  const TimeGrid g(0.0, 10.0, 0.1);
  const auto p = fixtures::fig4();
  const auto tr = integrate_ode<3>([&](double, const State3& s) { return rhs_three_var(s, p); },
                                   State3{0.0, 0.053, 0.0}, g);
  ExcitationOptions<3> opt;
  const auto rep = detect_excitation(tr, opt);
  CHECK_FALSE(rep.excited);
  CHECK(rep.spike_duration == 0.0);
}

TEST_CASE("spike duration interpolates the crossings") {
  // tent 0 -> 1 -> 0 over [0, 2]; above 0.5 for exactly 1 unit
  const TimeGrid g(0.0, 2.0, 0.25);
  Trajectory<2> tr{g, {}, default_labels(2)};
  for (std::size_t i = 0; i < g.size(); ++i) tr.samples.push_back({1.0 - std::fabs(g.time(i) - 1.0), 0.0});
  ExcitationOptions<2> opt;
  opt.excitation_level = 0.5;
  const auto rep = detect_excitation(tr, opt);
  CHECK(rep.spike_duration == Approx(1.0));
  CHECK(rep.peak_time == 1.0);
}

TEST_CASE("real-world scaling") {
  const RealScale sc;
  CHECK(sc.years(60.0) == 900.0);
  CHECK(sc.passionaries(1.0) == 10000.0);
  CHECK(sc.nonpassionaries(1.0) == 1000000.0);
  CHECK(sc.years(30.0) - sc.years(20.0) == 150.0);

  const TimeGrid g(0.0, 2.0, 1.0);
  Trajectory<2> tr{g, {{1.0, 1.0}, {0.5, 0.2}, {0.1, 0.3}}, default_labels(2)};
  const auto real = scale_to_real(tr, sc);
  CHECK(real.time(2) == 30.0);
  CHECK(real[0][0] == 10000.0);
  CHECK(real[1][1] == Approx(200000.0));
  CHECK(real.peak(0).second == sc.years(tr.peak(0).second));
}

TEST_CASE("RK4 is fourth order") {
  const auto p = fixtures::fig4();
  const State3 s0{0.07, 0.053, 0.05};
  auto end = [&](double dt) { return integrate_three_var(p, s0, TimeGrid(0.0, 10.0, dt)).back(); };
  const auto a = end(0.2), b = end(0.1), c = end(0.05);
  const double ratio = norm(a - b) / norm(b - c);
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}

TEST_CASE("positivity over the reference parameter sets") {
  const TimeGrid g(0.0, 200.0, 1e-2);
  for (const auto& p : {fixtures::fig2(), fixtures::fig3()}) {
    const auto tr = integrate_two_var(p, {0.1, p.y0}, g);
    for (const auto& s : tr.samples) CHECK((s[0] > 0.0 && s[1] > 0.0));
  }
  for (const auto& [p, s0] : {std::pair{fixtures::fig4(), State3{0.07, 0.053, 0.05}},
                              std::pair{fixtures::fig5(), State3{0.07, 0.075, 0.05}},
                              std::pair{fixtures::fig6(), State3{0.1, 0.075, 0.6}}}) {
    const auto tr = integrate_three_var(p, s0, g);
    const bool positive = std::all_of(tr.samples.begin(), tr.samples.end(), [](const State3& s) {
      return s[0] > 0.0 && s[1] > 0.0 && s[2] > 0.0;
    });
    CHECK(positive);
  }
}

TEST_CASE("trajectories stay inside the base prism") {
  const auto p = fixtures::fig4();
  for (double x0 : {0.04, 0.07, 0.1, 0.4}) {
    const State3 s0{x0, 0.053, 0.05};
    const auto seq = build_prism_sequence(p, 0.75, 2, s0);
    const auto tr = integrate_three_var(p, s0, TimeGrid(0.0, 500.0, 1e-2));
    for (const auto& s : tr.samples) REQUIRE(seq.prisms[0].strictly_contains(s));
  }
}

TEST_CASE("stable equilibria are fixed by the integrator") {
  const auto p = fixtures::fig4();
  const TimeGrid g(0.0, 200.0, 1e-2);
  for (const auto& e : equilibria_three_var(p).points) {
    if (e.stability != Stability::stable) continue;
    const auto tr = integrate_ode<3>([&](double, const State3& s) { return rhs_three_var(s, p); },
                                     e.point, g);
    double dev = 0.0;
    for (const auto& s : tr.samples) dev = std::max(dev, norm(s - e.point));
    CHECK(dev < 1e-9);
  }
}

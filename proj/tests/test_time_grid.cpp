#include <catch_amalgamated.hpp>

#include <cmath>

#include "ethnokinetics/errors.hpp"
#include "ethnokinetics/time_grid.hpp"

using namespace ethnokinetics;

TEST_CASE("uniform grid") {
  const TimeGrid g(0.0, 200.0, 1e-3);
  CHECK(g.steps() == 200000);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(g.steps()) == 200.0);
  for (std::size_t i = 0; i < g.steps(); i += 997) CHECK(g.step(i) <= 1e-3 * (1 + 1e-9));
}

TEST_CASE("step is snapped down per segment") {
  const TimeGrid g(0.0, 1.0, 0.3);
  CHECK(g.steps() == 4);
  CHECK(g.step(0) == Catch::Approx(0.25));
}

TEST_CASE("mandatory knots are grid points exactly") {
  const TimeGrid g(0.0, 300.0, 1e-3, {30.0, 35.0});
  CHECK(g.is_grid_point(30.0));
  CHECK(g.is_grid_point(35.0));
  CHECK(g.is_grid_point(300.0));
  CHECK(g.steps() == 300000);

  const TimeGrid h(0.0, 10.0, 0.3, {1.0 / 3.0, std::sqrt(2.0)});
  CHECK(h.is_grid_point(1.0 / 3.0));
  CHECK(h.is_grid_point(std::sqrt(2.0)));
  for (std::size_t i = 0; i < h.steps(); ++i) CHECK(h.step(i) <= 0.3);
  CHECK(h.time(h.index_at_or_after(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("invalid grids") {
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, -0.1), ValidationError);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0.1, {2.0}), ValidationError);
}

TEST_CASE("coarsening keeps every factor-th point") {
  const TimeGrid g(0.0, 50.0, 5e-4);
  const TimeGrid c = g.coarsened(2);
  REQUIRE(c.size() == (g.size() - 1) / 2 + 1);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.time(i) == g.time(2 * i));
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1.0 / 3.0).coarsened(2), KnotMisalignment);
}

TEST_CASE("scaling maps times linearly") {
  const TimeGrid g(0.0, 60.0, 0.5);
  const TimeGrid y = g.scaled(15.0);
  CHECK(y.tf() == 900.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(y.time(i) == g.time(i) * 15.0);
}

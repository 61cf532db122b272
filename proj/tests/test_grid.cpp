#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "afd/grid.hpp"

using namespace afd;

TEST_CASE("grid construction and indexing") {
  auto g = make_grid_2d(2.0, 3.0, 8, 6);
  CHECK(g.size == 48);
  CHECK(g.h[0] == Catch::Approx(0.5));
  CHECK(g.h[1] == Catch::Approx(1.0));
  // last axis is fastest
  CHECK(g.stride[1] == 1);
  CHECK(g.stride[0] == 6);
  CHECK(g.cell_volume() == Catch::Approx(0.5));

  // cell centers are symmetric about the origin and never hit it
  CHECK(g.coord(0, 0) == Catch::Approx(-1.75));
  CHECK(g.coord(0, 7) == Catch::Approx(1.75));
  for (int j = 0; j < 8; ++j) CHECK(g.coord(0, j) != 0.0);

  Point p = g.cell_center(6 * 3 + 2);  // (i,j) = (3,2)
  CHECK(p[0] == Catch::Approx(g.coord(0, 3)));
  CHECK(p[1] == Catch::Approx(g.coord(1, 2)));

  CHECK_THROWS_AS(make_grid_1d(1.0, 5), std::invalid_argument);  // odd
  CHECK_THROWS_AS(make_grid_1d(1.0, 2), std::invalid_argument);  // too few
  CHECK_THROWS_AS(make_grid_1d(-1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(TensorGrid(4, {1, 1, 1}, {4, 4, 4}), std::invalid_argument);
}

TEST_CASE("sampling and reductions") {
  auto g = make_grid_1d(1.0, 10);
  ScalarField u = sample([](const Point&) { return 2.0; }, g);
  CHECK(mass(u) == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(sup_norm(u) == Catch::Approx(2.0));
  CHECK(lp_norm(u, 1.0) == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(lp_norm(u, 2.0) == Catch::Approx(std::sqrt(8.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm(u, 0.5), std::invalid_argument);

  // negative round-off clamps, non-finite throws
  ScalarField w = sample([](const Point& p) { return p[0]; }, g);
  CHECK(w[0] == 0.0);
  CHECK(w[9] > 0.0);
  CHECK_THROWS_AS(sample([](const Point& p) { return 1.0 / (p[0] - p[0]); }, g),
                  std::domain_error);

  // local mass of an indicator box
  Box k{1, {-0.5, 0, 0}, {0.5, 0, 0}};
  CHECK(local_mass(u, k) == Catch::Approx(2.0 * 1.0).epsilon(1e-13));
  Box bad{1, {0.5, 0, 0}, {-0.5, 0, 0}};
  CHECK_THROWS_AS(local_mass(u, bad), std::invalid_argument);
  CHECK(k.volume() == Catch::Approx(1.0));
  CHECK(k.contains(Point{0.2, 0, 0}));
  CHECK_FALSE(k.contains(Point{0.7, 0, 0}));
}

TEST_CASE("second difference is exact on quadratics with exact ghosts") {
  auto g = make_grid_2d(1.0, 2.0, 12, 16);
  auto f = [](const Point& p) { return 3.0 + p[0] * p[0] + 2.0 * p[1] * p[1]; };
  ScalarField u = sample(f, g);
  auto bc = ghost_dirichlet([&](const Point& p, double) { return f(p); });

  ScalarField dxx = second_difference(u, 0, bc);
  ScalarField dyy = second_difference(u, 1, bc);
  for (std::int64_t i = 0; i < g.size; ++i) {
    CHECK(dxx[i] == Catch::Approx(2.0).epsilon(1e-10));
    CHECK(dyy[i] == Catch::Approx(4.0).epsilon(1e-10));
  }

  SECTION("zero-Dirichlet and reflecting ghosts differ only at the boundary") {
    ScalarField a = second_difference(u, 0, ghost_zero());
    ScalarField b = second_difference(u, 0, ghost_reflect());
    for (std::int64_t i = 0; i < g.size; ++i) {
      const std::int64_t row = (i / g.stride[0]) % g.cells[0];
      if (row == 0 || row == g.cells[0] - 1) continue;
      CHECK(a[i] == dxx[i]);
      CHECK(b[i] == dxx[i]);
    }
  }
}

TEST_CASE("donor-cell drift divergence") {
  auto g = make_grid_1d(2.0, 16);
  ScalarField v = sample([](const Point& p) { return 1.0 + 0.2 * p[0] * p[0]; }, g);

  SECTION("conservative: the cell sum telescopes to zero") {
    ScalarField d = upwind_drift_divergence(v, 0, 0.7);
    double s = 0.0;
    for (std::int64_t i = 0; i < g.size; ++i) s += d[i];
    CHECK(std::abs(s) < 1e-14);
  }

  SECTION("sign convention: c d/dy (y v) is positive near the origin for v > 0") {
    ScalarField d = upwind_drift_divergence(v, 0, 1.0);
    // cells adjacent to the origin receive inflow from both sides
    CHECK(d[7] > 0.0);
    CHECK(d[8] > 0.0);
  }

  SECTION("c must be nonnegative") {
    CHECK_THROWS_AS(upwind_drift_divergence(v, 0, -1.0), std::invalid_argument);
  }
}

TEST_CASE("multilinear interpolation") {
  auto g = make_grid_2d(1.0, 1.0, 16, 16);
  auto lin = [](const Point& p) { return 2.0 + 0.5 * p[0] + 1.5 * p[1]; };
  ScalarField u = sample(lin, g);

  // exact on linear functions in the interior hull of cell centers
  for (double x : {-0.8, -0.33, 0.0, 0.51, 0.87}) {
    for (double y : {-0.7, 0.1, 0.62}) {
      CHECK(interpolate(u, Point{x, y, 0}) == Catch::Approx(lin(Point{x, y, 0})).epsilon(1e-13));
    }
  }

  // beyond the outermost centers the value clamps to the boundary cell
  CHECK(interpolate(u, Point{5.0, 0.1, 0}) ==
        Catch::Approx(interpolate(u, Point{g.coord(0, 15), 0.1, 0})).epsilon(1e-13));
}

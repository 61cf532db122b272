#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "afd/fit.hpp"

using namespace afd;

TEST_CASE("fit_power_law recovers exact power laws") {
  std::vector<std::pair<double, double>> s;
  for (double x = 1.0; x <= 32.0; x *= 2.0) s.push_back({x, 3.5 * std::pow(x, -1.25)});
  auto f = fit_power_law(s);
  CHECK(f.exponent == Catch::Approx(-1.25).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == Catch::Approx(3.5).epsilon(1e-12));
  CHECK(f.residual < 1e-13);
  CHECK(f.points == 6);
  CHECK(f.x_min == Catch::Approx(1.0));
  CHECK(f.x_max == Catch::Approx(32.0));
}

TEST_CASE("fit_power_law reports scatter in the residual") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> noise(-0.1, 0.1);
  std::vector<std::pair<double, double>> s;
  for (double x = 1.0; x <= 64.0; x *= 2.0)
    s.push_back({x, std::pow(x, 2.0) * std::exp(noise(rng))});
  auto f = fit_power_law(s);
  CHECK(f.exponent == Catch::Approx(2.0).margin(0.1));
  CHECK(f.residual > 1e-3);
  CHECK(f.residual < 0.1);
}

TEST_CASE("fit_power_law input validation") {
  std::vector<std::pair<double, double>> few = {{1, 1}, {2, 2}, {4, 4}, {8, 8}};
  CHECK_THROWS_AS(fit_power_law(few), std::invalid_argument);

  std::vector<std::pair<double, double>> narrow = {{1, 1}, {1.5, 1}, {2, 1}, {2.5, 1}, {3, 1}};
  CHECK_THROWS_AS(fit_power_law(narrow), std::invalid_argument);

  std::vector<std::pair<double, double>> neg = {{1, 1}, {2, -1}, {4, 1}, {8, 1}, {16, 1}};
  CHECK_THROWS_AS(fit_power_law(neg), std::invalid_argument);
}

TEST_CASE("window restricts the abscissa") {
  std::vector<std::pair<double, double>> s;
  for (double x = 1.0; x <= 100.0; x *= 2.0) s.push_back({x, x});
  auto w = window(s, 4.0, 40.0);
  REQUIRE(w.size() == 4);  // 4, 8, 16, 32
  CHECK(w.front().first == Catch::Approx(4.0));
  CHECK(w.back().first == Catch::Approx(32.0));
}

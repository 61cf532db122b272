#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "afd/closed_forms.hpp"
#include "afd/fit.hpp"
#include "afd/similarity.hpp"

using namespace afd;

namespace {

double quad_mass_1d(const std::function<double(double)>& f, double L, int n) {
  const double h = 2.0 * L / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(-L + (i + 0.5) * h);
  return s * h;
}

}  // namespace

TEST_CASE("1D Barenblatt profile values and symmetry") {
  // b(1/2) = (1-m)/(2m(1+m)) = 1/3
  CHECK(barenblatt_coefficient(0.5, 1) == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(barenblatt_profile_1d(0.0, 0.5, 1.0) == Catch::Approx(1.0));
  CHECK(barenblatt_profile_1d(std::sqrt(3.0), 0.5, 1.0) == Catch::Approx(0.25).epsilon(1e-13));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double y = u(rng);
    CHECK(barenblatt_profile_1d(y, 0.7, 2.0) ==
          Catch::Approx(barenblatt_profile_1d(-y, 0.7, 2.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(barenblatt_profile_1d(0.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("1D VSS constant and time scaling") {
  // certified axis constant for m = 1/2 is 9 (direct substitution into the
  // equation: u = A t^2 x^{-4} needs 2A = 6 sqrt(A))
  CHECK(vss_axis_constant_1d(0.5) == Catch::Approx(9.0).epsilon(1e-13));
  CHECK(vss_1d(1.0, 1.0, 0.5) == Catch::Approx(9.0).epsilon(1e-13));
  CHECK(vss_1d(1.0, 4.0, 0.5) == Catch::Approx(9.0 * 16.0).epsilon(1e-13));
  CHECK_THROWS_AS(vss_1d(0.0, 1.0, 0.5), std::domain_error);

  // pointwise monotone limit C -> 0 of the Barenblatt profile
  double prev = 0.0;
  for (double C : {1.0, 0.1, 0.01, 0.001}) {
    const double val = barenblatt_profile_1d(1.5, 0.5, C);
    CHECK(val > prev);
    prev = val;
  }
  CHECK(prev < vss_1d(1.5, 1.0, 0.5));
  CHECK(barenblatt_profile_1d(1.5, 0.5, 1e-9) ==
        Catch::Approx(vss_1d(1.5, 1.0, 0.5)).epsilon(1e-6));
}

TEST_CASE("evolution residual oracle certifies the time dependent forms") {
  // 1D VSS solves u_t = (u^m)_xx away from x = 0
  auto vss = [](double x, double t) { return vss_1d(x, t, 0.5); };
  CHECK(std::abs(residual_evolution_1d(vss, 0.5, 2.0, 1.0, 1e-3, 1e-3)) < 1e-5);
  CHECK(std::abs(residual_evolution_1d(vss, 0.5, -3.0, 2.0, 1e-3, 1e-3)) < 1e-5);

  // 1D Barenblatt solution u = t^{-a} F(x t^{-a}), a = 1/(m+1)
  auto bb = [](double x, double t) {
    const double a = 2.0 / 3.0;
    return std::pow(t, -a) * barenblatt_profile_1d(x * std::pow(t, -a), 0.5, 1.0);
  };
  CHECK(std::abs(residual_evolution_1d(bb, 0.5, 0.7, 1.0, 1e-3, 1e-3)) < 1e-5);
  CHECK(std::abs(residual_evolution_1d(bb, 0.5, 2.0, 1.5, 1e-3, 1e-3)) < 1e-5);

  // regression: the variant of the inner coefficient with the m factor
  // dropped does not solve the equation
  auto bad = [](double x, double t) {
    const double a = 2.0 / 3.0;
    const double y = x * std::pow(t, -a);
    return std::pow(t, -a) * std::pow(1.0 + y * y / 6.0, -2.0);
  };
  CHECK(std::abs(residual_evolution_1d(bad, 0.5, 0.7, 1.0, 1e-3, 1e-3)) > 1e-2);
}

TEST_CASE("stationary residual oracle certifies the isotropic profile") {
  auto me = validate_exponents(2, {0.5, 0.5});
  auto se = derive_similarity(me);

  ProfileSampler good = [](const Point& y) { return isotropic_profile(y, 0.5, 2, 1.0); };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    Point y{u(rng), u(rng), 0.0};
    CHECK(std::abs(residual_stationary(good, me, se, y, 1e-3)) < 1e-5);
  }

  // regression: outer exponent -2/(1-m) fails the oracle
  ProfileSampler doubled = [](const Point& y) {
    return isotropic_profile_with_exponent(y, 0.5, 2, 1.0, 2.0 / (1.0 - 0.5));
  };
  CHECK(std::abs(residual_stationary(doubled, me, se, Point{1.0, 0.5, 0.0}, 1e-3)) > 1e-2);

  // constant profile at the origin: the drift term gives alpha * F
  ProfileSampler flat = [](const Point&) { return 3.0; };
  CHECK(residual_stationary(flat, me, se, Point{0.0, 0.0, 0.0}, 1e-3) ==
        Catch::Approx(se.alpha * 3.0).epsilon(1e-8));

  // 1D VSS profile solves the 1D stationary equation away from 0
  auto me1 = validate_exponents(1, {0.5});
  auto se1 = derive_similarity(me1);
  ProfileSampler vssp = [](const Point& y) { return 9.0 * std::pow(std::abs(y[0]), -4.0); };
  CHECK(std::abs(residual_stationary(vssp, me1, se1, Point{2.0, 0, 0}, 1e-3)) < 1e-5);

  // radial symmetry of the isotropic profile
  CHECK(isotropic_profile(Point{0.6, 0.8, 0.0}, 0.5, 2, 2.0) ==
        Catch::Approx(isotropic_profile(Point{1.0, 0.0, 0.0}, 0.5, 2, 2.0)).epsilon(1e-14));
  CHECK(isotropic_profile(Point{0, 0, 0}, 0.5, 2, 2.0) ==
        Catch::Approx(std::pow(2.0, -2.0)).epsilon(1e-14));
}

TEST_CASE("isotropic profile mass relation") {
  // 1D check against quadrature
  const double M = isotropic_profile_mass(0.5, 1, 1.0);
  const double q = quad_mass_1d([](double y) { return barenblatt_profile_1d(y, 0.5, 1.0); },
                                400.0, 400000);
  CHECK(M == Catch::Approx(q).epsilon(1e-6));
  // inverse
  CHECK(isotropic_profile_c_from_mass(0.5, 1, M) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(isotropic_profile_c_from_mass(0.5, 2, isotropic_profile_mass(0.5, 2, 0.3)) ==
        Catch::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("partition surrogate") {
  auto me = validate_exponents(2, {0.8, 0.4});
  auto se = derive_similarity(me);
  auto cal = default_calibration(me, se);

  const double c1 = vss_axis_constant_1d(0.8);
  const double c2 = vss_axis_constant_1d(0.4);
  CHECK(c1 == Catch::Approx(std::pow(14.4, 5.0)).epsilon(1e-12));
  CHECK(c2 == Catch::Approx(std::pow(1.12 / 0.6, 5.0 / 3.0)).epsilon(1e-12));

  SECTION("on an axis the surrogate is the 1D VSS in that direction") {
    for (double r : {0.5, 1.0, 3.0}) {
      CHECK(partition_min(Point{r, 0.0, 0.0}, 2.0, me, se, cal) ==
            Catch::Approx(vss_1d(r, 2.0, 0.8)).epsilon(1e-13));
      CHECK(partition_min(Point{0.0, -r, 0.0}, 2.0, me, se, cal) ==
            Catch::Approx(vss_1d(r, 2.0, 0.4)).epsilon(1e-13));
    }
  }

  SECTION("at (1,1), t=1 the slow axis dominates the minimum") {
    CHECK(partition_min(Point{1.0, 1.0, 0.0}, 1.0, me, se, cal) ==
          Catch::Approx(c2).epsilon(1e-13));
    CHECK(partition_argmin(Point{1.0, 1.0, 0.0}, 1.0, me, se, cal) == 1);
    CHECK(vss_time_ratio(Point{1.0, 1.0, 0.0}, 1.0, me, se, cal) ==
          Catch::Approx(5.0 / 3.0).epsilon(1e-13));
  }

  SECTION("homogeneity: k * W(k^gamma y, t) = W(y, t)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_real_distribution<double> lk(-3.0, 3.0);
    for (int i = 0; i < 40; ++i) {
      Point y{u(rng), u(rng), 0.0};
      if (y[0] == 0.0 && y[1] == 0.0) continue;
      const double k = std::pow(10.0, lk(rng));
      Point z{y[0] * std::pow(k, se.gamma[0]), y[1] * std::pow(k, se.gamma[1]), 0.0};
      CHECK(k * partition_min(z, 1.0, me, se, cal) ==
            Catch::Approx(partition_min(y, 1.0, me, se, cal)).epsilon(1e-12));
    }
  }

  SECTION("strictly increasing in t at fixed x") {
    double prev = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double v = partition_min(Point{1.3, 0.7, 0.0}, t, me, se, cal);
      CHECK(v > prev);
      prev = v;
    }
  }

  SECTION("singular at the origin") {
    CHECK_THROWS_AS(partition_min(Point{0.0, 0.0, 0.0}, 1.0, me, se, cal), std::domain_error);
  }
}

TEST_CASE("sandwich bound and the max/mean inequality") {
  auto me = validate_exponents(2, {0.8, 0.4});
  auto se = derive_similarity(me);
  auto cal = default_calibration(me, se);

  CHECK(sandwich_bound(Point{1.0, 1.0, 0.0}, se, 2, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(sandwich_bound(Point{2.0, 0.0, 0.0}, se, 2, 3.0) ==
        Catch::Approx(3.0 * std::pow(2.0, -10.0)).epsilon(1e-13));

  // pointwise sandwich with the surrogate constants K1' = min C_i,
  // K2' = N max C_i (the max/mean inequality)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    Point y{u(rng), u(rng), 0.0};
    if (y[0] == 0.0 && y[1] == 0.0) continue;
    const double w = partition_min(y, 1.0, me, se, cal);
    CHECK(sandwich_bound(y, se, 2, cal.k1) <= w * (1.0 + 1e-12));
    CHECK(w <= sandwich_bound(y, se, 2, cal.k2) * (1.0 + 1e-12));
  }
}

TEST_CASE("change-of-mass rescaling") {
  auto me = validate_exponents(1, {0.5});
  auto se = derive_similarity(me);

  SECTION("k = 1 is the identity") {
    ProfileSampler f = [](const Point& y) { return barenblatt_profile_1d(y[0], 0.5, 1.0); };
    auto g = mass_rescale(f, 1.0, se);
    CHECK(g(Point{0.7, 0, 0}) == Catch::Approx(f(Point{0.7, 0, 0})).epsilon(1e-14));
  }

  SECTION("output mass is k^beta times input mass (quadrature)") {
    ProfileSampler f = [](const Point& y) { return barenblatt_profile_1d(y[0], 0.5, 1.0); };
    auto g = mass_rescale(f, 2.0, se);
    const double m0 = quad_mass_1d([&](double y) { return f(Point{y, 0, 0}); }, 300.0, 300000);
    const double m1 = quad_mass_1d([&](double y) { return g(Point{y, 0, 0}); }, 300.0, 300000);
    CHECK(se.beta == Catch::Approx(0.75).epsilon(1e-14));
    CHECK(m1 / m0 == Catch::Approx(std::pow(2.0, 0.75)).epsilon(1e-4));
  }

  SECTION("the partition surrogate is a fixed point for every k") {
    auto me2 = validate_exponents(2, {0.8, 0.4});
    auto se2 = derive_similarity(me2);
    auto cal = default_calibration(me2, se2);
    ProfileSampler w = [&](const Point& y) { return partition_min(y, 1.0, me2, se2, cal); };
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> lk(-3.0, 3.0);
    for (int i = 0; i < 30; ++i) {
      Point y{u(rng), u(rng), 0.0};
      if (y[0] == 0.0 && y[1] == 0.0) continue;
      auto g = mass_rescale(w, std::pow(10.0, lk(rng)), se2);
      CHECK(g(y) == Catch::Approx(w(y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("level lines") {
  auto me = validate_exponents(2, {0.9, 0.1});
  auto se = derive_similarity(me);
  auto cal = default_calibration(me, se);

  SECTION("axis inversion is exact") {
    Point x = level_line(Point{1.0, 0.0, 0.0}, 0.25, me, se, cal);
    CHECK(x[1] == 0.0);
    CHECK(partition_min(x, 1.0, me, se, cal) == Catch::Approx(0.25).epsilon(1e-12));
  }

  SECTION("coordinates scale like L^{-gamma_i}") {
    Point w{std::sqrt(0.5), std::sqrt(0.5), 0.0};
    Point a = level_line(w, 1.0, me, se, cal);
    Point b = level_line(w, 2.0, me, se, cal);
    CHECK(b[0] / a[0] == Catch::Approx(std::pow(2.0, -se.gamma[0])).epsilon(1e-12));
    CHECK(b[1] / a[1] == Catch::Approx(std::pow(2.0, -se.gamma[1])).epsilon(1e-12));
  }

  SECTION("traced locus exponent ratio gamma_2/gamma_1 = 9") {
    CHECK(se.gamma[1] / se.gamma[0] == Catch::Approx(9.0).epsilon(1e-12));
    // the locus over L at fixed omega satisfies x_2 ~ x_1^{gamma_2/gamma_1}
    Point w{0.6, 0.8, 0.0};
    std::vector<std::pair<double, double>> locus;
    // gamma_1 = 0.05 is tiny, so L must span many decades for x_1 to move
    for (double L = 1e-8; L <= 1e8; L *= 100.0) {
      Point x = level_line(w, L, me, se, cal);
      locus.push_back({x[0], x[1]});
    }
    auto f = fit_power_law(locus);
    CHECK(f.exponent == Catch::Approx(9.0).epsilon(1e-9));
  }
}

TEST_CASE("time monotonicity ratios of the surrogate") {
  auto me = validate_exponents(2, {0.8, 0.4});
  auto se = derive_similarity(me);
  auto cal = default_calibration(me, se);

  CHECK(vss_time_ratio(Point{2.0, 0.0, 0.0}, 1.5, me, se, cal) ==
        Catch::Approx(5.0).epsilon(1e-13));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> ts(0.1, 10.0);
  for (int i = 0; i < 60; ++i) {
    Point x{u(rng), u(rng), 0.0};
    if (x[0] == 0.0 && x[1] == 0.0) continue;
    const double r = vss_time_ratio(x, ts(rng), me, se, cal);
    CHECK(r >= 5.0 / 3.0 - 1e-13);
    CHECK(r <= 5.0 + 1e-13);
  }
}

TEST_CASE("delayed relative error of the surrogate") {
  auto iso = validate_exponents(2, {0.5, 0.5});
  auto se = derive_similarity(iso);
  auto cal = default_calibration(iso, se);

  // on an axis with mu = 2, t = 1, h = 1: (2^2 - 1)/1 = 3
  CHECK(delayed_relative_error(Point{1.0, 0.0, 0.0}, 1.0, 1.0, iso, se, cal) ==
        Catch::Approx(3.0).epsilon(1e-12));

  // t * value -> mu as t grows (h = t/100)
  for (double t : {10.0, 100.0, 1000.0}) {
    const double v = delayed_relative_error(Point{1.0, 2.0, 0.0}, t, t / 100.0, iso, se, cal);
    CHECK(t * v == Catch::Approx(2.0).epsilon(0.02));
  }

  // anisotropic axis formula is exact
  auto me = validate_exponents(2, {0.8, 0.4});
  auto se2 = derive_similarity(me);
  auto cal2 = default_calibration(me, se2);
  const double h = 0.7, t = 2.0;
  CHECK(delayed_relative_error(Point{0.0, 1.5, 0.0}, t, h, me, se2, cal2) ==
        Catch::Approx((std::pow(1.0 + h / t, 5.0 / 3.0) - 1.0) / h).epsilon(1e-12));
}

TEST_CASE("isotropic reduction: radial decay exponent 2/(1-m) on random rays") {
  auto iso = validate_exponents(2, {0.5, 0.5});
  auto se = derive_similarity(iso);
  auto cal = default_calibration(iso, se);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    const double th = ang(rng);
    std::vector<std::pair<double, double>> ray;
    for (double r = 1.0; r <= 16.0; r *= 1.3) {
      Point x{r * std::cos(th), r * std::sin(th), 0.0};
      ray.push_back({r, partition_min(x, 1.0, iso, se, cal)});
    }
    auto f = fit_power_law(ray);
    CHECK(f.exponent == Catch::Approx(-2.0 / (1.0 - 0.5)).epsilon(0.01));
  }
}

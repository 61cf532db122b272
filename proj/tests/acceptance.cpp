// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier than the unit suite; everything stays at desk scale.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "afd/closed_forms.hpp"
#include "afd/experiments.hpp"
#include "afd/grid.hpp"
#include "afd/local_mass.hpp"
#include "afd/similarity.hpp"
#include "afd/solver.hpp"

using namespace afd;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double exact_1d(double x, double t) {
  const double a = 2.0 / 3.0;
  return std::pow(t, -a) * barenblatt_profile_1d(x * std::pow(t, -a), 0.5, 1.0);
}

double benchmark_rel_l1(int n) {
  auto me = validate_exponents(1, {0.5});
  auto g = make_grid_1d(20.0, n);
  ScalarField u0 = sample([](const Point& p) { return exact_1d(p[0], 1.0); }, g, 1.0);
  SolverConfig cfg;
  cfg.bc = BoundaryKind::BarrierDirichlet;
  cfg.barrier = [](const Point& p, double t) { return exact_1d(p[0], t); };
  auto tr = solve_cauchy(u0, 2.0, me, cfg);
  const ScalarField& u = tr.snapshots.back().second;
  double num = 0.0, den = 0.0;
  for (std::int64_t i = 0; i < g.size; ++i) {
    const double r = exact_1d(g.cell_center(i)[0], 2.0);
    num += std::abs(u[i] - r);
    den += r;
  }
  return num / den;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

bool verdict_of(const ExperimentReport& rep, const std::string& id, std::string& detail) {
  const Verdict* v = rep.find(id);
  if (!v) {
    detail += id + ": missing; ";
    return false;
  }
  detail += id + "=" + fmt(v->measured) + (v->pass ? " " : " (FAIL) ");
  return v->pass;
}

}  // namespace

int main() {
  criterion(1, "similarity algebra identities on 1000 random exponent sets", [](std::string& d) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dims(1, 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int tried = 0;
    double worst = 0.0;
    while (tried < 1000) {
      const int n = dims(rng);
      std::vector<double> m(n);
      for (auto& v : m) v = 0.01 + 0.98 * unif(rng);
      if (!check_exponents(n, m).empty()) continue;
      ++tried;
      auto se = derive_similarity(validate_exponents(n, m));
      double ssum = 0.0, gsum = 0.0;
      for (int i = 0; i < n; ++i) {
        ssum += se.sigma[i];
        gsum += se.gamma[i];
        worst = std::max(worst, std::abs(se.alpha * (m[i] - 1.0) + 2.0 * se.a[i] - 1.0));
        worst = std::max(worst,
                         std::abs((se.sigma[i] - se.gamma[i]) * 2.0 * se.alpha - 1.0));
      }
      worst = std::max(worst, std::abs(ssum - 1.0));
      worst = std::max(worst, std::abs(se.beta - (1.0 - gsum)));
    }
    d = "worst identity violation " + fmt(worst);
    return worst <= 1e-12;
  });

  criterion(2, "closed forms certified by residual oracles at h=1e-3", [](std::string& d) {
    const double h = 1e-3;
    auto me1 = validate_exponents(1, {0.5});
    auto se1 = derive_similarity(me1);
    double worst = 0.0;
    // stationary: 1D Barenblatt profile and 1D VSS profile
    ProfileSampler bb = [](const Point& y) { return barenblatt_profile_1d(y[0], 0.5, 1.0); };
    // evaluation points stay at O(1) scale: the finite-difference error of
    // the oracle is O(h^2) times fourth derivatives, which blow up near the
    // VSS singularity at the origin
    ProfileSampler vp = [](const Point& y) { return 9.0 * std::pow(std::abs(y[0]), -4.0); };
    for (double y : {0.7, 1.0, 2.5, 6.0})
      worst = std::max(worst, std::abs(residual_stationary(bb, me1, se1, Point{y, 0, 0}, h)));
    for (double y : {2.0, 3.0, 6.0})
      worst = std::max(worst, std::abs(residual_stationary(vp, me1, se1, Point{y, 0, 0}, h)));
    // evolution: full source solution and time-dependent VSS
    auto bbx = [](double x, double t) { return exact_1d(x, t); };
    auto vsx = [](double x, double t) { return vss_1d(x, t, 0.5); };
    for (auto [x, t] : {std::pair{0.7, 1.0}, {1.5, 1.0}, {2.0, 1.5}, {3.0, 2.0}})
      worst = std::max(worst, std::abs(residual_evolution_1d(bbx, 0.5, x, t, h, h)));
    for (auto [x, t] : {std::pair{2.0, 1.0}, {3.0, 1.0}, {3.0, 2.0}})
      worst = std::max(worst, std::abs(residual_evolution_1d(vsx, 0.5, x, t, h, h)));
    // isotropic N=2 profile with the corrected outer exponent passes ...
    auto me2 = validate_exponents(2, {0.5, 0.5});
    auto se2 = derive_similarity(me2);
    ProfileSampler iso = [](const Point& y) { return isotropic_profile(y, 0.5, 2, 1.0); };
    for (double y : {0.4, 1.1, 2.3})
      worst = std::max(worst, std::abs(residual_stationary(iso, me2, se2, Point{y, 0.7, 0}, h)));
    // ... and the doubled outer exponent fails (typo regression)
    ProfileSampler bad = [](const Point& y) {
      return isotropic_profile_with_exponent(y, 0.5, 2, 1.0, 4.0);
    };
    const double bad_res = std::abs(residual_stationary(bad, me2, se2, Point{1.0, 0.5, 0}, h));
    d = "worst residual " + fmt(worst) + ", doubled-exponent residual " + fmt(bad_res);
    return worst <= 1e-5 && bad_res > 1e-2;
  });

  criterion(3, "1D benchmark: accuracy, convergence, reflecting mass drift", [](std::string& d) {
    const double e1 = benchmark_rel_l1(800);   // h = 0.05
    const double e2 = benchmark_rel_l1(1600);  // h = 0.025
    auto me = validate_exponents(1, {0.5});
    auto g = make_grid_1d(20.0, 800);
    ScalarField u0 = sample([](const Point& p) { return exact_1d(p[0], 1.0); }, g, 1.0);
    SolverConfig cfg;
    cfg.bc = BoundaryKind::Reflecting;
    auto tr = solve_cauchy(u0, 2.0, me, cfg);
    const double drift =
        std::abs(mass(tr.snapshots.back().second) - mass(u0)) / mass(u0);
    d = "relL1(h=0.05)=" + fmt(e1) + ", ratio=" + fmt(e1 / e2) + ", drift=" + fmt(drift);
    return e1 <= 1e-2 && e1 / e2 >= 1.7 && drift <= 1e-10;
  });

  // shared smoothing/spreading reports
  ExperimentReport smooth_iso, smooth_aniso;
  {
    auto iso = validate_exponents(2, {0.5, 0.5});
    auto aniso = validate_exponents(2, {0.8, 0.4});
    smooth_iso = exp_smoothing_and_spread(iso);
    smooth_aniso = exp_smoothing_and_spread(aniso);
  }

  criterion(4, "sup-norm smoothing slope is -alpha (isotropic and anisotropic)",
            [&](std::string& d) {
              bool ok = verdict_of(smooth_iso, "sup-slope", d);
              ok = verdict_of(smooth_aniso, "sup-slope", d) && ok;
              return ok;
            });

  criterion(5, "anisotropic half-mass-width slopes are sigma_i alpha", [&](std::string& d) {
    bool ok = verdict_of(smooth_aniso, "width-slope-1", d);
    ok = verdict_of(smooth_aniso, "width-slope-2", d) && ok;
    return ok;
  });

  criterion(6, "isotropic N=2 fundamental profile matches the closed form", [](std::string& d) {
    auto iso = validate_exponents(2, {0.5, 0.5});
    ProfileTailOptions opt;
    opt.ladder = {10.0};
    opt.grid = TensorGrid(2, {14.0, 14.0, 0}, {224, 224, 0});
    opt.steady_tol = 1e-4;
    opt.compare_closed_form = true;
    auto rep = exp_profile_and_tail(iso, opt);
    bool ok = verdict_of(rep, "profile-match", d);
    ok = verdict_of(rep, "ssni", d) && ok;
    d += "steady_tol=1e-4 met ";
    return ok;
  });

  // shared anisotropic profile-ladder report (moderate box: ladder/collapse)
  ExperimentReport tails;
  {
    auto aniso = validate_exponents(2, {0.8, 0.4});
    ProfileTailOptions opt;
    opt.grid = TensorGrid(2, {12.0, 20.0, 0}, {192, 256, 0});
    tails = exp_profile_and_tail(aniso, opt);
  }

  criterion(7, "universal tails: exponents -10 and -10/3, band, surrogate ratio",
            [](std::string& d) {
              // the steep axis (m=0.8, exponent -10) approaches its asymptote
              // as 1 + O(y^-2), so the fit annulus must sit far out: wide box
              // along axis 1, single large mass, tiny floor so the tail
              // (F ~ 6e-14 at y=72) is resolved rather than clamped
              auto aniso = validate_exponents(2, {0.8, 0.4});
              ProfileTailOptions opt;
              opt.ladder = {64.0};
              opt.grid = TensorGrid(2, {80.0, 20.0, 0}, {640, 224, 0});
              opt.floor_rel = 1e-16;
              opt.inner_cut_axis = {60.0, 2.0, 0.0};
              auto rep = exp_profile_and_tail(aniso, opt);
              bool ok = verdict_of(rep, "tail-exponent-1", d);
              ok = verdict_of(rep, "tail-exponent-2", d) && ok;
              ok = verdict_of(rep, "band-ratio", d) && ok;
              ok = verdict_of(rep, "logratio-slope-1", d) && ok;
              ok = verdict_of(rep, "logratio-slope-2", d) && ok;
              return ok;
            });

  criterion(8, "VSS limit: monotone mass ladder and 3% collapse", [&](std::string& d) {
    bool ok = verdict_of(tails, "monotone-ladder", d);
    ok = verdict_of(tails, "collapse", d) && ok;
    return ok;
  });

  // shared comparison machinery (anisotropic)
  auto aniso = validate_exponents(2, {0.8, 0.4});
  TensorGrid cgrid(2, {10.0, 16.0, 0}, {128, 160, 0});
  ScalarField shared_profile;
  {
    auto se = derive_similarity(aniso);
    SolverConfig pcfg;
    pcfg.scheme = Scheme::LinearlyImplicit;
    pcfg.bc = BoundaryKind::Reflecting;
    shared_profile = solve_profile(5.0, aniso, se, cgrid, pcfg);
  }

  criterion(9, "GHP: bounds and trend for clipped bump; exact slice within 2%",
            [&](std::string& d) {
              ComparisonOptions bump;
              bump.data = ComparisonData::ClippedBump;
              bump.mass = 5.0;
              bump.T = 3.0;
              bump.grid = cgrid;
              auto rb = exp_ghp(aniso, bump);
              bool ok = verdict_of(rb, "ghp-bounds", d);
              ok = verdict_of(rb, "ghp-trend", d) && ok;

              ComparisonOptions slice = bump;
              slice.data = ComparisonData::ExactSlice;
              slice.profile = &shared_profile;
              auto rs = exp_ghp(aniso, slice);
              ok = verdict_of(rs, "ghp-exact-slice", d) && ok;
              return ok;
            });

  criterion(10, "ACRE: error halves per decade; delayed data decays like 1/t",
            [&](std::string& d) {
              ComparisonOptions bump;
              bump.data = ComparisonData::ClippedBump;
              bump.mass = 5.0;
              bump.T = 3.0;
              bump.grid = cgrid;
              auto rb = exp_acre(aniso, bump);
              bool ok = verdict_of(rb, "acre-halving", d);
              ok = verdict_of(rb, "acre-core", d) && ok;

              ComparisonOptions del = bump;
              del.data = ComparisonData::Delayed;
              del.delay = 0.1;
              del.T = 1.0;
              del.profile = &shared_profile;
              auto rd = exp_acre(aniso, del);
              ok = verdict_of(rd, "acre-delayed-slope", d) && ok;
              return ok;
            });

  criterion(11, "semigroup: L1 contraction, order preservation, Lp rates", [&](std::string& d) {
    auto rep = exp_rates_and_semigroup(aniso, 123456789);
    bool ok = verdict_of(rep, "l1-contraction", d);
    ok = verdict_of(rep, "order-preservation", d) && ok;
    ok = verdict_of(rep, "lp-rate-1", d) && ok;
    ok = verdict_of(rep, "lp-rate-2", d) && ok;
    ok = verdict_of(rep, "mass-conservation", d) && ok;
    return ok;
  });

  criterion(12, "local mass: Y scaling, discrete Hoelder, ODE bound, growth exponent",
            [&](std::string& d) {
              auto k = default_flatness(aniso);
              Box K1{2, {0.0, 0.0, 0}, {1.0, 1.0, 0}};
              auto [p1, phi1] = build_bump(K1, k, aniso);
              double worst_scaling = 0.0;
              for (double s : {2.0, 4.0}) {
                Box Ks{2, {0.0, 0.0, 0}, {s, s, 0}};
                auto [ps, phis] = build_bump(Ks, k, aniso);
                for (int i = 0; i < 2; ++i) {
                  const double predicted = std::pow(s, 2.0 - 2.0 / (1.0 - aniso.m[i]));
                  worst_scaling = std::max(
                      worst_scaling, std::abs(ps.Y[i] / p1.Y[i] / predicted - 1.0));
                }
              }
              d += "Y-scaling err " + fmt(worst_scaling) + " ";
              bool ok = worst_scaling <= 5e-3;

              // trajectory check: bulk outside the probe box flows in
              auto g = make_grid_2d(3.0, 3.0, 64, 64);
              ScalarField u0 = sample(
                  [](const Point& p) {
                    const double dx = p[0] - 1.8, dy = p[1] - 1.8;
                    return 0.05 + std::exp(-3.0 * (dx * dx + dy * dy));
                  },
                  g, 0.0);
              SolverConfig cfg;
              cfg.bc = BoundaryKind::Reflecting;
              cfg.snapshot_times = {0.05, 0.1, 0.15};
              auto tr = solve_cauchy(u0, 0.2, aniso, cfg);
              Box K{2, {-1.0, -1.0, 0}, {1.0, 1.0, 0}};
              auto [probe, phi] = build_bump(K, k, aniso);
              auto rep = verify_local_mass(tr, probe, phi, aniso);
              double min_margin = rep.margin[0];
              for (double m : rep.margin) min_margin = std::min(min_margin, m);
              d += "hoelder " + fmt(rep.hoelder_worst) + ", min margin " + fmt(min_margin) +
                   ", growth exp " + fmt(rep.fitted_growth_exponent);
              ok = ok && rep.bound_ok && min_margin > 0.0 && rep.hoelder_worst <= 1e-8 &&
                   rep.fitted_growth_exponent <= (1.0 / (1.0 - 0.8)) * 1.10;
              return ok;
            });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}

#pragma once

// Local mass control: flat product test functions supported in a box K, the
// per-axis functionals
//   Y_i = int_K (phi^{-m_i} |d^2_ii phi|)^{1/(1-m_i)} dx,
// the resulting ODE bound X' = sum_i X^{m_i} Y_i^{1-m_i} for the windowed
// mass X(t) = int u phi dx, and verification against solver trajectories.
//
// The integrand uses |d^2 phi| (the second derivative changes sign inside K);
// this strengthens the bound slightly and makes it valid for |dX/dt|. The
// Hoelder pairing (1/m_i, 1/(1-m_i)) introduces no extra constant.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "afd/grid.hpp"
#include "afd/similarity.hpp"
#include "afd/solver.hpp"

namespace afd {

/// Flat product bump phi(x) = prod_i (4 t_i (1 - t_i))^{k_i},
/// t_i = (x_i - a_i)/L_i, supported in K with phi = 1 at the center.
struct BumpFunction {
  Box box;
  std::array<double, kMaxDim> k{};

  double factor(int i, double xi) const {
    const double t = (xi - box.a[i]) / box.length(i);
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::pow(4.0 * t * (1.0 - t), k[i]);
  }

  double operator()(const Point& x) const {
    double v = 1.0;
    for (int i = 0; i < box.dim; ++i) v *= factor(i, x[i]);
    return v;
  }

  /// d^2/dx_i^2 of the i-th 1D factor (analytic).
  double factor_dd(int i, double xi) const {
    const double L = box.length(i);
    const double t = (xi - box.a[i]) / L;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double g = 4.0 * t * (1.0 - t);
    const double gp = 4.0 - 8.0 * t;
    const double ki = k[i];
    const double dd = ki * (ki - 1.0) * std::pow(g, ki - 2.0) * gp * gp -
                      8.0 * ki * std::pow(g, ki - 1.0);
    return dd / (L * L);
  }

  /// d^2_ii phi at x (product rule over the tensor factors).
  double second_partial(int i, const Point& x) const {
    double v = factor_dd(i, x[i]);
    for (int j = 0; j < box.dim; ++j)
      if (j != i) v *= factor(j, x[j]);
    return v;
  }
};

struct LocalMassProbe {
  Box box;
  std::array<double, kMaxDim> k{};
  std::vector<double> Y;       // quadrature values
  double quad_disagreement = 0.0;  // relative disagreement of the two resolutions
};

/// Default flatness exponents: safely inside the integrability region
/// k_i (1 - m_i) > 1 and k_i >= 2.
inline std::array<double, kMaxDim> default_flatness(const MediumExponents& me) {
  std::array<double, kMaxDim> k{};
  for (int i = 0; i < me.dim; ++i)
    k[i] = std::max(2.0, std::ceil(2.0 / (1.0 - me.m[i]) - 1e-9) + 1.0);
  return k;
}

namespace detail {

// Composite Gauss-Legendre (8 nodes per panel) on [0,1].
inline double gauss_01(const std::function<double(double)>& f, int panels) {
  static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  double total = 0.0;
  const double w = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * w;
    double s = 0.0;
    for (int q = 0; q < 4; ++q) {
      s += ws[q] * (f(c + 0.5 * w * xs[q]) + f(c - 0.5 * w * xs[q]));
    }
    total += 0.5 * w * s;
  }
  return total;
}

}  // namespace detail

/// Builds the probe: validates the flatness constraints and computes the Y_i
/// by tensorized quadrature, with a refinement disagreement check (0.1%).
inline std::pair<LocalMassProbe, BumpFunction> build_bump(const Box& box,
                                                          const std::array<double, kMaxDim>& k,
                                                          const MediumExponents& me) {
  check_box(box);
  if (box.dim != me.dim) throw std::invalid_argument("build_bump: box/exponent dim mismatch");
  for (int i = 0; i < me.dim; ++i) {
    if (!(k[i] >= 2.0))
      throw std::invalid_argument("build_bump: k_i >= 2 required (bounded second derivatives)");
    if (!(k[i] * (1.0 - me.m[i]) > 1.0))
      throw std::invalid_argument("build_bump: integrability requires k_i (1 - m_i) > 1");
  }
  BumpFunction phi{box, k};
  LocalMassProbe probe{box, k, {}, 0.0};
  probe.Y.resize(me.dim);

  // Tensor structure: Y_i = Z_i * prod_{j != i} int phi_j, with
  // Z_i the 1D integral of (phi_i^{-m_i} |phi_i''|)^{1/(1-m_i)}.
  auto z_integrand = [&](int i, double mi, double t) {
    const double g = 4.0 * t * (1.0 - t);
    if (g <= 0.0) return 0.0;
    const double ki = k[i];
    const double L = box.length(i);
    const double gp = 4.0 - 8.0 * t;
    const double dd =
        (ki * (ki - 1.0) * std::pow(g, ki - 2.0) * gp * gp - 8.0 * ki * std::pow(g, ki - 1.0)) /
        (L * L);
    const double val = std::pow(g, -mi * ki) * std::abs(dd);
    return std::pow(val, 1.0 / (1.0 - mi));
  };
  auto compute_at = [&](int panels) {
    std::vector<double> y(me.dim);
    std::vector<double> plain(me.dim);  // int phi_j dx_j
    for (int j = 0; j < me.dim; ++j) {
      plain[j] = box.length(j) * detail::gauss_01(
                                     [&](double t) {
                                       const double g = 4.0 * t * (1.0 - t);
                                       return g > 0.0 ? std::pow(g, k[j]) : 0.0;
                                     },
                                     panels);
    }
    for (int i = 0; i < me.dim; ++i) {
      const double z =
          box.length(i) *
          detail::gauss_01([&](double t) { return z_integrand(i, me.m[i], t); }, panels);
      double v = z;
      for (int j = 0; j < me.dim; ++j)
        if (j != i) v *= plain[j];
      y[i] = v;
    }
    return y;
  };
  auto y1 = compute_at(64);
  auto y2 = compute_at(128);
  double worst = 0.0;
  for (int i = 0; i < me.dim; ++i) worst = std::max(worst, std::abs(y2[i] - y1[i]) / y2[i]);
  if (worst > 1e-3)
    throw std::runtime_error("build_bump: quadrature refinement disagreement > 0.1%");
  probe.Y = y2;
  probe.quad_disagreement = worst;
  return {probe, phi};
}

/// Midpoint-sum version of Y_i on a grid: the exact discrete counterpart used
/// by the Hoelder inequality check.
inline std::vector<double> compute_Y_grid(const BumpFunction& phi, const MediumExponents& me,
                                          const TensorGrid& g) {
  std::vector<double> y(me.dim, 0.0);
  const double vol = g.cell_volume();
  for (std::int64_t c = 0; c < g.size; ++c) {
    const Point p = g.cell_center(c);
    const double ph = phi(p);
    if (ph <= 0.0) continue;
    for (int i = 0; i < me.dim; ++i) {
      const double integrand = std::pow(ph, -me.m[i]) * std::abs(phi.second_partial(i, p));
      y[i] += std::pow(integrand, 1.0 / (1.0 - me.m[i]));
    }
  }
  for (auto& v : y) v *= vol;
  return y;
}

/// Value at time t of the maximal solution of
///   X' = sum_i X^{m_i} Y_i^{1-m_i},  X(0) = X0.
/// Integrated in the substituted variable G = X^{1-m_min}, whose right-hand
/// side is continuous at X = 0, so the maximal solution escapes X0 = 0 (e.g.
/// one axis, m = 1/2, Y = 1 gives X(t) = t^2/4). Classical RK4 with step
/// doubling until 1e-10 relative agreement.
inline double ode_mass_bound(double X0, const std::vector<double>& Y,
                             const MediumExponents& me, double t) {
  if (X0 < 0.0) throw std::invalid_argument("ode_mass_bound: X0 >= 0 required");
  if (!(t >= 0.0)) throw std::invalid_argument("ode_mass_bound: t >= 0 required");
  if (t == 0.0) return X0;
  double m_min = me.m[0];
  for (double mi : me.m) m_min = std::min(m_min, mi);
  const double q = 1.0 - m_min;
  std::vector<double> yp(me.dim);
  for (int i = 0; i < me.dim; ++i) yp[i] = std::pow(Y[i], 1.0 - me.m[i]);
  auto rhs = [&](double G) {
    G = std::max(G, 0.0);
    double s = 0.0;
    for (int i = 0; i < me.dim; ++i) s += std::pow(G, (me.m[i] - m_min) / q) * yp[i];
    return q * s;
  };
  auto integrate = [&](int n) {
    double G = std::pow(X0, q);
    const double h = t / n;
    for (int s = 0; s < n; ++s) {
      const double k1 = rhs(G);
      const double k2 = rhs(G + 0.5 * h * k1);
      const double k3 = rhs(G + 0.5 * h * k2);
      const double k4 = rhs(G + h * k3);
      G += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return std::pow(G, 1.0 / q);
  };
  int n = 64;
  double prev = integrate(n);
  for (int iter = 0; iter < 14; ++iter) {
    n *= 2;
    const double cur = integrate(n);
    if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

/// Closed-form supersolution of the renormalized ODE: with Xt = X/V(K),
/// mhat = max_i m_i and D = sum_i z_i^{1-m_i} / L_i^2,
///   S(t) = (max(Xt0, 1)^{1-mhat} + (1-mhat) D t)^{1/(1-mhat)} >= Xt(t),
/// so the renormalized local mass is O(t^{1/(1-mhat)}) for large t.
inline double renormalized_supersolution(double Xt0, const LocalMassProbe& probe,
                                         const MediumExponents& me, double t) {
  double mhat = me.m[0];
  for (double mi : me.m) mhat = std::max(mhat, mi);
  const double V = probe.box.volume();
  double D = 0.0;
  for (int i = 0; i < me.dim; ++i) {
    // z_i = Y_i / (V L_i^{-2/(1-m_i)}) recovers the length-free 1D constant
    const double Li = probe.box.length(i);
    const double zi = probe.Y[i] / (V * std::pow(Li, -2.0 / (1.0 - me.m[i])));
    D += std::pow(zi, 1.0 - me.m[i]) / (Li * Li);
  }
  const double base = std::pow(std::max(Xt0, 1.0), 1.0 - mhat) + (1.0 - mhat) * D * t;
  return std::pow(base, 1.0 / (1.0 - mhat));
}

struct LocalMassReport {
  std::vector<double> time;
  std::vector<double> X;          // measured windowed mass
  std::vector<double> bound;      // ODE bound from X(0)
  std::vector<double> margin;     // bound*(1+tol) - X
  double hoelder_worst = 0.0;     // max over snapshots of lhs - rhs
  double fitted_growth_exponent = 0.0;  // of the ODE bound at large t
  bool bound_ok = false;
  std::vector<double> Y_quad;
  std::vector<double> Y_grid;
};

/// Checks a solver trajectory against the local mass machinery: the windowed
/// mass stays below the ODE bound, and the discrete Hoelder inequality
///   sum_i int u^{m_i} d^2_ii phi dx <= sum_i X^{m_i} (Y_i^grid)^{1-m_i}
/// holds at every snapshot (it is exact for the midpoint sums).
inline LocalMassReport verify_local_mass(const Trajectory& traj, const LocalMassProbe& probe,
                                         const BumpFunction& phi, const MediumExponents& me,
                                         double tolerance = 0.01) {
  if (traj.snapshots.empty()) throw std::invalid_argument("verify_local_mass: empty trajectory");
  LocalMassReport rep;
  rep.Y_quad = probe.Y;
  const TensorGrid& g = traj.snapshots.front().second.grid;
  rep.Y_grid = compute_Y_grid(phi, me, g);
  const double t0 = traj.snapshots.front().first;
  const double vol = g.cell_volume();

  // cache phi and its second partials on the grid
  std::vector<double> phi_c(static_cast<size_t>(g.size));
  std::vector<std::vector<double>> dd(me.dim, std::vector<double>(static_cast<size_t>(g.size)));
  for (std::int64_t c = 0; c < g.size; ++c) {
    const Point p = g.cell_center(c);
    phi_c[static_cast<size_t>(c)] = phi(p);
    for (int i = 0; i < me.dim; ++i) dd[i][static_cast<size_t>(c)] = phi.second_partial(i, p);
  }

  double X0 = 0.0;
  bool ok = true;
  for (const auto& [t, u] : traj.snapshots) {
    double X = 0.0;
    for (std::int64_t c = 0; c < g.size; ++c) X += u[c] * phi_c[static_cast<size_t>(c)];
    X *= vol;
    if (rep.time.empty()) X0 = X;
    const double bound = ode_mass_bound(X0, probe.Y, me, t - t0);
    rep.time.push_back(t);
    rep.X.push_back(X);
    rep.bound.push_back(bound);
    rep.margin.push_back(bound * (1.0 + tolerance) - X);
    if (X > bound * (1.0 + tolerance)) ok = false;

    // discrete Hoelder check
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < me.dim; ++i) {
      double s = 0.0;
      for (std::int64_t c = 0; c < g.size; ++c)
        s += std::pow(u[c], me.m[i]) * dd[i][static_cast<size_t>(c)];
      lhs += s * vol;
      rhs += std::pow(X, me.m[i]) * std::pow(rep.Y_grid[i], 1.0 - me.m[i]);
    }
    rep.hoelder_worst = std::max(rep.hoelder_worst, lhs - rhs);
  }
  rep.bound_ok = ok;

  // large-t growth exponent of the ODE bound, fitted on [T, 100T]
  {
    const double T = std::max(1.0, rep.time.back() - t0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = 0; k < 16; ++k) {
      const double tt = T * std::pow(100.0, k / 15.0);
      const double b = ode_mass_bound(X0, probe.Y, me, tt);
      const double lx = std::log(tt), ly = std::log(b);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    rep.fitted_growth_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

}  // namespace afd

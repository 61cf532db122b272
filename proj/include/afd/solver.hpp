#pragma once

// Time steppers for the physical equation u_t = sum_i (u^{m_i})_{x_i x_i}
// and for its rescaled (confined) form
//   v_tau = sum_i [ (v^{m_i})_{y_i y_i} + alpha sigma_i (y_i v)_{y_i} ],
// plus the Cauchy driver and the steady-state driver that computes the
// fundamental-solution profiles F_M.
//
// Two schemes:
//  - explicit: forward Euler, monotone under the stable_dt bound. Inherits
//    the comparison principle and L1 contraction cell by cell.
//  - linearly-implicit: lagged-diffusivity backward Euler with one
//    tridiagonal solve per axis per step (Lie splitting). Used where the
//    singular diffusivity m u^{m-1} makes the explicit bound impractical
//    (fast-diffusion tails).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "afd/grid.hpp"
#include "afd/similarity.hpp"

namespace afd {

/// Reported as exit code 2 by the CLI.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { Explicit, LinearlyImplicit };
enum class BoundaryKind { ZeroDirichlet, BarrierDirichlet, Reflecting };

struct SolverConfig {
  Scheme scheme = Scheme::Explicit;
  BoundaryKind bc = BoundaryKind::ZeroDirichlet;
  std::function<double(const Point&, double)> barrier;  // supersolution sampler

  // Diffusivity floor. floor_eps < 0 means "derive from data":
  // eps = floor_rel * sup(u0); with adaptive_floor the sup is re-read from
  // the current state each step.
  double floor_eps = -1.0;
  double floor_rel = 1e-8;
  bool adaptive_floor = false;

  double theta = 0.9;        // CFL safety, in (0,1]
  double drift_theta = 0.5;  // CFL fraction for the explicit drift substep

  std::vector<double> snapshot_times;
  double steady_tol = 1e-4;
  long long max_steps = 200000000;

  // Implicit physical stepping uses dt = max(implicit_dt0, implicit_dt_factor * t).
  double implicit_dt0 = 1e-4;
  double implicit_dt_factor = 0.02;

  void validate() const {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta in (0,1] required");
    if (floor_eps == 0.0 && floor_rel == 0.0 && scheme == Scheme::Explicit)
      throw std::invalid_argument("explicit scheme needs a positive diffusivity floor");
    for (size_t i = 1; i < snapshot_times.size(); ++i)
      if (!(snapshot_times[i] > snapshot_times[i - 1]))
        throw std::invalid_argument("snapshot times must be strictly increasing");
    if (bc == BoundaryKind::BarrierDirichlet && !barrier)
      throw std::invalid_argument("barrier-dirichlet requires a barrier sampler");
  }
};

struct Trajectory {
  std::vector<std::pair<double, ScalarField>> snapshots;
  std::vector<double> diag_time;
  std::vector<double> diag_mass;
  std::vector<double> diag_sup;
  std::vector<std::vector<double>> diag_energy;  // per axis, cumulative in time
  std::vector<double> diag_dt;                   // step size at each diagnostic time
};

namespace detail {

inline double resolve_floor(const ScalarField& u, const SolverConfig& cfg) {
  if (cfg.floor_eps >= 0.0 && !cfg.adaptive_floor) return cfg.floor_eps;
  return cfg.floor_rel * sup_norm(u);
}

inline GhostPolicy power_ghost(const SolverConfig& cfg, double mi) {
  switch (cfg.bc) {
    case BoundaryKind::Reflecting:
      return ghost_reflect();
    case BoundaryKind::ZeroDirichlet:
      return ghost_zero();
    case BoundaryKind::BarrierDirichlet:
      return ghost_dirichlet([barrier = cfg.barrier, mi](const Point& p, double t) {
        return std::pow(barrier(p, t), mi);
      });
  }
  return ghost_zero();
}

inline ScalarField power_field(const ScalarField& u, double mi) {
  ScalarField w(u.grid, u.time);
  for (std::int64_t i = 0; i < u.grid.size; ++i) w[i] = std::pow(u[i], mi);
  return w;
}

inline void check_finite(const ScalarField& u, const char* where) {
  for (double x : u.v)
    if (!std::isfinite(x)) throw NumericalFailure(std::string(where) + ": non-finite value");
}

// Thomas solve of the lagged-diffusivity row system along one grid line:
//   u_j - r (a_{j-1} u_{j-1} - 2 a_j u_j + a_{j+1} u_{j+1}) = rhs_j,
// r = dt/h^2. The matrix is an M-matrix (column-dominant), so the solve is
// positivity preserving; with reflecting ends the column sums are 1 and the
// line mass is conserved exactly.
struct TriWorkspace {
  std::vector<double> dl, d, du, rhs;
};

// drift_c > 0 adds the confining drift c * d/dy (y u) to the axis operator,
// discretized with donor-cell upwinding inside the same tridiagonal system.
// Keeping diffusion and drift in one solve matters: in the fast-diffusion
// tail both fluxes are huge and nearly cancel, and any splitting between
// them leaves a steady state that depends on dt at leading order there.
inline void implicit_axis_sweep(ScalarField& u, int axis, double dt, double mi, double eps,
                                const SolverConfig& cfg, TriWorkspace& ws, double drift_c = 0.0) {
  const TensorGrid& g = u.grid;
  const double r = dt / (g.h[axis] * g.h[axis]);
  const double q = dt / g.h[axis];
  const int n = g.cells[axis];
  ws.dl.assign(n, 0.0);
  ws.d.assign(n, 0.0);
  ws.du.assign(n, 0.0);
  ws.rhs.assign(n, 0.0);
  std::vector<double> a(n);

  detail::for_each_line(g, axis, [&](std::int64_t base, std::int64_t stride, int cnt) {
    for (int j = 0; j < cnt; ++j) {
      const double uj = u[base + j * stride];
      a[j] = std::pow(std::max(uj, eps), mi - 1.0);
      ws.rhs[j] = uj;
    }
    for (int j = 0; j < cnt; ++j) {
      ws.d[j] = 1.0 + 2.0 * r * a[j];
      if (j > 0) ws.dl[j] = -r * a[j - 1];
      if (j < cnt - 1) ws.du[j] = -r * a[j + 1];
    }
    if (drift_c != 0.0) {
      // interior faces only; the outer faces carry no drift flux, so the
      // drift conserves line mass exactly. Velocity w(y) = -c y points
      // inward; donor cell chosen by the face sign.
      for (int j = 0; j + 1 < cnt; ++j) {
        const double y_face = g.coord(axis, j) + 0.5 * g.h[axis];
        const double w = -drift_c * y_face;
        const double a_face = std::min(a[j], a[j + 1]);
        if (std::abs(w) * g.h[axis] <= 2.0 * a_face) {
          // centered flux, second order; the Peclet gate keeps the matrix
          // an M-matrix (off-diagonals nonpositive)
          ws.d[j] += 0.5 * q * w;
          ws.du[j] += 0.5 * q * w;
          ws.dl[j + 1] -= 0.5 * q * w;
          ws.d[j + 1] -= 0.5 * q * w;
        } else {
          const double wp = std::max(w, 0.0), wm = std::min(w, 0.0);
          // donor-cell flux at face j+1/2 enters row j with +q, row j+1 with -q
          ws.d[j] += q * wp;
          ws.du[j] += q * wm;
          ws.d[j + 1] -= q * wm;
          ws.dl[j + 1] -= q * wp;
        }
      }
    }
    // boundary closure
    switch (cfg.bc) {
      case BoundaryKind::Reflecting:
        // ghost (a u) mirrors the boundary cell
        ws.d[0] -= r * a[0];
        ws.d[cnt - 1] -= r * a[cnt - 1];
        break;
      case BoundaryKind::ZeroDirichlet:
        break;  // ghost u^m = 0
      case BoundaryKind::BarrierDirichlet: {
        Point plo = g.cell_center(base);
        plo[axis] -= g.h[axis];
        Point phi = g.cell_center(base + (cnt - 1) * stride);
        phi[axis] += g.h[axis];
        ws.rhs[0] += r * std::pow(cfg.barrier(plo, u.time), mi);
        ws.rhs[cnt - 1] += r * std::pow(cfg.barrier(phi, u.time), mi);
        break;
      }
    }
    // Thomas forward sweep
    for (int j = 1; j < cnt; ++j) {
      const double w = ws.dl[j] / ws.d[j - 1];
      ws.d[j] -= w * ws.du[j - 1];
      ws.rhs[j] -= w * ws.rhs[j - 1];
    }
    double prev = ws.rhs[cnt - 1] / ws.d[cnt - 1];
    u[base + (cnt - 1) * stride] = std::max(prev, 0.0);
    for (int j = cnt - 2; j >= 0; --j) {
      prev = (ws.rhs[j] - ws.du[j] * prev) / ws.d[j];
      u[base + j * stride] = std::max(prev, 0.0);
    }
  });
}

}  // namespace detail

/// Largest explicit step keeping the scheme a convex combination of stencil
/// values: dt = theta / (2 sum_i s_i / h_i^2), s_i = m_i max(u,eps)^{m_i-1}
/// maximized over cells. For fast diffusion the maximizer is the smallest
/// (floored) cell value.
inline double stable_dt(const ScalarField& u, const MediumExponents& me,
                        const SolverConfig& cfg) {
  const double eps = detail::resolve_floor(u, cfg);
  double umin = std::numeric_limits<double>::infinity();
  for (double x : u.v) umin = std::min(umin, x);
  double floored_min = std::max(umin, eps);
  if (!(floored_min > 0.0))
    throw std::invalid_argument(
        "stable_dt: zero cell value with zero floor makes the explicit diffusivity unbounded");
  // barrier values enter the stencil too
  if (cfg.bc == BoundaryKind::BarrierDirichlet) {
    // boundary barrier samples are supersolution values, bounded below by the
    // interior floor in the intended configurations; the interior bound rules.
  }
  double denom = 0.0;
  for (int i = 0; i < me.dim; ++i) {
    const double s = me.m[i] * std::pow(floored_min, me.m[i] - 1.0);
    denom += s / (u.grid.h[i] * u.grid.h[i]);
  }
  return cfg.theta / (2.0 * denom);
}

/// One explicit step of the physical equation. The floor enters only the
/// stability bound, never the fluxes.
inline ScalarField step_physical(const ScalarField& u, double dt, const MediumExponents& me,
                                 const SolverConfig& cfg) {
  ScalarField out = u;
  for (int i = 0; i < me.dim; ++i) {
    ScalarField w = detail::power_field(u, me.m[i]);
    ScalarField d2 = second_difference(w, i, detail::power_ghost(cfg, me.m[i]));
    for (std::int64_t j = 0; j < u.grid.size; ++j) out[j] += dt * d2[j];
  }
  for (auto& x : out.v) x = std::max(x, 0.0);
  detail::check_finite(out, "step_physical");
  out.time = u.time + dt;
  return out;
}

/// One explicit step of the rescaled equation (diffusion + confining drift).
inline ScalarField step_rescaled(const ScalarField& v, double dtau, const MediumExponents& me,
                                 const SimilarityExponents& se, const SolverConfig& cfg) {
  ScalarField out = v;
  for (int i = 0; i < me.dim; ++i) {
    ScalarField w = detail::power_field(v, me.m[i]);
    ScalarField d2 = second_difference(w, i, detail::power_ghost(cfg, me.m[i]));
    ScalarField dr = upwind_drift_divergence(v, i, se.alpha * se.sigma[i]);
    for (std::int64_t j = 0; j < v.grid.size; ++j) out[j] += dtau * (d2[j] + dr[j]);
  }
  for (auto& x : out.v) x = std::max(x, 0.0);
  detail::check_finite(out, "step_rescaled");
  out.time = v.time + dtau;
  return out;
}

/// One linearly-implicit step of the physical equation (lagged diffusivity,
/// one tridiagonal solve per axis).
inline ScalarField step_physical_implicit(const ScalarField& u, double dt,
                                          const MediumExponents& me, const SolverConfig& cfg) {
  ScalarField out = u;
  const double eps = detail::resolve_floor(u, cfg);
  detail::TriWorkspace ws;
  for (int i = 0; i < me.dim; ++i) detail::implicit_axis_sweep(out, i, dt, me.m[i], eps, cfg, ws);
  detail::check_finite(out, "step_physical_implicit");
  out.time = u.time + dt;
  return out;
}

/// Upwind CFL bound for the explicit drift substep of the rescaled equation.
inline double drift_dt_bound(const TensorGrid& g, const SimilarityExponents& se,
                             const SolverConfig& cfg) {
  double dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.dim; ++i) {
    const double speed = se.alpha * se.sigma[i] * g.half_extent[i];
    if (speed > 0.0) dt = std::min(dt, g.h[i] / speed);
  }
  return cfg.drift_theta * dt;
}

/// One step of the rescaled equation: per axis, one tridiagonal solve
/// coupling implicit diffusion with the upwinded confining drift.
inline ScalarField step_rescaled_implicit(const ScalarField& v, double dtau,
                                          const MediumExponents& me,
                                          const SimilarityExponents& se,
                                          const SolverConfig& cfg) {
  ScalarField out = v;
  const double eps = detail::resolve_floor(out, cfg);
  detail::TriWorkspace ws;
  for (int i = 0; i < me.dim; ++i)
    detail::implicit_axis_sweep(out, i, dtau, me.m[i], eps, cfg, ws,
                                se.alpha * se.sigma[i]);
  detail::check_finite(out, "step_rescaled_implicit");
  out.time = v.time + dtau;
  return out;
}

namespace detail {

inline void record_diagnostics(Trajectory& tr, const ScalarField& u, const MediumExponents& me,
                               const std::vector<double>& cum_energy, double dt) {
  tr.diag_time.push_back(u.time);
  tr.diag_mass.push_back(mass(u));
  tr.diag_sup.push_back(sup_norm(u));
  tr.diag_energy.push_back(cum_energy);
  tr.diag_dt.push_back(dt);
}

// Instantaneous dissipation integrals int |d_i u^{m_i}|^2 dx via face
// differences (interior faces only).
inline std::vector<double> dissipation(const ScalarField& u, const MediumExponents& me) {
  std::vector<double> e(me.dim, 0.0);
  const double vol = u.grid.cell_volume();
  for (int i = 0; i < me.dim; ++i) {
    ScalarField w = power_field(u, me.m[i]);
    const double inv_h = 1.0 / u.grid.h[i];
    double s = 0.0;
    for_each_line(u.grid, i, [&](std::int64_t base, std::int64_t stride, int n) {
      for (int j = 0; j + 1 < n; ++j) {
        const double d = (w[base + (j + 1) * stride] - w[base + j * stride]) * inv_h;
        s += d * d;
      }
    });
    e[i] = s * vol;
  }
  return e;
}

}  // namespace detail

/// Adaptive driver for the Cauchy problem: explicit steps bounded by
/// stable_dt (or implicit steps with the log-growing dt policy), snapshots
/// and diagnostics at the configured times.
inline Trajectory solve_cauchy(const ScalarField& u0, double t_end, const MediumExponents& me,
                               SolverConfig cfg) {
  cfg.validate();
  if (cfg.floor_eps < 0.0 && !cfg.adaptive_floor) cfg.floor_eps = cfg.floor_rel * sup_norm(u0);

  Trajectory tr;
  ScalarField u = u0;
  std::vector<double> cum_energy(me.dim, 0.0);
  tr.snapshots.emplace_back(u.time, u);
  detail::record_diagnostics(tr, u, me, cum_energy, 0.0);

  std::vector<double> events = cfg.snapshot_times;
  events.push_back(t_end);
  size_t next_event = 0;
  while (next_event < events.size() && events[next_event] <= u.time) ++next_event;

  long long steps = 0;
  while (u.time < t_end) {
    double dt;
    if (cfg.scheme == Scheme::Explicit) {
      dt = stable_dt(u, me, cfg);
    } else {
      dt = std::max(cfg.implicit_dt0, cfg.implicit_dt_factor * u.time);
    }
    bool at_event = false;
    if (next_event < events.size() && u.time + dt >= events[next_event] - 1e-14) {
      dt = events[next_event] - u.time;
      at_event = true;
    }
    auto diss = detail::dissipation(u, me);
    u = (cfg.scheme == Scheme::Explicit) ? step_physical(u, dt, me, cfg)
                                         : step_physical_implicit(u, dt, me, cfg);
    for (int i = 0; i < me.dim; ++i) cum_energy[i] += dt * diss[i];
    if (at_event) {
      u.time = events[next_event];  // land exactly on the event time
      tr.snapshots.emplace_back(u.time, u);
      detail::record_diagnostics(tr, u, me, cum_energy, dt);
      ++next_event;
    }
    if (++steps > cfg.max_steps) throw NumericalFailure("solve_cauchy: max steps exceeded");
  }
  return tr;
}

/// Evolves the rescaled equation from v0, recording snapshots at the given
/// rescaled times. Uses the linearly-implicit splitting with the drift CFL
/// step unless cfg selects the explicit scheme.
inline Trajectory solve_rescaled(const ScalarField& v0, double tau_end,
                                 const MediumExponents& me, const SimilarityExponents& se,
                                 SolverConfig cfg) {
  cfg.validate();
  if (cfg.floor_eps < 0.0 && !cfg.adaptive_floor) cfg.floor_eps = cfg.floor_rel * sup_norm(v0);

  Trajectory tr;
  ScalarField v = v0;
  std::vector<double> cum_energy(me.dim, 0.0);
  tr.snapshots.emplace_back(v.time, v);
  detail::record_diagnostics(tr, v, me, cum_energy, 0.0);

  std::vector<double> events = cfg.snapshot_times;
  events.push_back(tau_end);
  size_t next_event = 0;
  while (next_event < events.size() && events[next_event] <= v.time) ++next_event;

  const double dtau_cfl = drift_dt_bound(v.grid, se, cfg);
  long long steps = 0;
  while (v.time < tau_end) {
    double dtau = dtau_cfl;
    if (cfg.scheme == Scheme::Explicit) dtau = std::min(dtau, stable_dt(v, me, cfg));
    bool at_event = false;
    if (next_event < events.size() && v.time + dtau >= events[next_event] - 1e-14) {
      dtau = events[next_event] - v.time;
      at_event = true;
    }
    v = (cfg.scheme == Scheme::Explicit) ? step_rescaled(v, dtau, me, se, cfg)
                                         : step_rescaled_implicit(v, dtau, me, se, cfg);
    if (at_event) {
      v.time = events[next_event];
      tr.snapshots.emplace_back(v.time, v);
      detail::record_diagnostics(tr, v, me, cum_energy, dtau);
      ++next_event;
    }
    if (++steps > cfg.max_steps) throw NumericalFailure("solve_rescaled: max steps exceeded");
  }
  return tr;
}

/// Narrow initial bump for the fundamental-solution solve: mass M in the
/// centered block of 2^N cells.
inline ScalarField delta_bump(const TensorGrid& g, double M) {
  ScalarField v(g, 0.0);
  const double val = M / ((1 << g.dim) * g.cell_volume());
  std::array<std::array<int, 2>, kMaxDim> idx{};
  for (int i = 0; i < g.dim; ++i) idx[i] = {g.cells[i] / 2 - 1, g.cells[i] / 2};
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    std::int64_t flat = 0;
    for (int i = 0; i < g.dim; ++i) flat += static_cast<std::int64_t>(idx[i][(c >> i) & 1]) * g.stride[i];
    v[flat] = val;
  }
  return v;
}

/// Computes the fundamental-solution profile F_M as the steady state of the
/// rescaled equation, starting from a centered bump of mass M. Convergence
/// is declared when the L1 increment per unit rescaled time drops below
/// steady_tol relative to the mass.
inline ScalarField solve_profile(double M, const MediumExponents& me,
                                 const SimilarityExponents& se, const TensorGrid& g,
                                 SolverConfig cfg) {
  if (!(M > 0.0)) throw std::invalid_argument("solve_profile: M > 0 required");
  cfg.scheme = Scheme::LinearlyImplicit;
  if (cfg.bc == BoundaryKind::BarrierDirichlet && !cfg.barrier)
    throw std::invalid_argument("solve_profile: barrier sampler required");
  cfg.validate();
  ScalarField v = delta_bump(g, M);
  if (cfg.floor_eps < 0.0 && !cfg.adaptive_floor) {
    cfg.adaptive_floor = true;  // the delta's sup is not a useful reference
  }
  const double dtau = drift_dt_bound(g, se, cfg);
  const double window = 0.5;  // Cauchy-increment window in rescaled time
  const int window_steps = std::max(1, static_cast<int>(window / dtau));
  ScalarField prev = v;
  long long steps = 0;
  while (true) {
    for (int k = 0; k < window_steps; ++k) {
      v = step_rescaled_implicit(v, dtau, me, se, cfg);
      if (++steps > cfg.max_steps)
        throw NumericalFailure("solve_profile: no steady state within max steps");
    }
    // relative per-cell increment: the tail carries negligible mass but the
    // comparison experiments read it in relative terms, so an L1 criterion
    // would stop while the tail is still moving
    const double ref_floor = 1e-12 * sup_norm(v);
    double rel = 0.0;
    for (std::int64_t j = 0; j < g.size; ++j) {
      const double ref = std::max(std::max(v[j], prev[j]), ref_floor);
      rel = std::max(rel, std::abs(v[j] - prev[j]) / ref);
    }
    const double rate = rel / (window_steps * dtau);
    if (rate <= cfg.steady_tol) break;
    prev = v;
  }
  return v;
}

}  // namespace afd

#pragma once

// Anisotropic tensor-product grids (N <= 3), nonnegative scalar fields and
// the discrete calculus used by the steppers: midpoint-rule integrals,
// second differences and the conservative donor-cell drift divergence.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace afd {

constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;

/// Cell-centered tensor grid on the box prod_i [-L_i, L_i].
/// Cell counts are even so no cell center sits at the origin (the VSS is
/// singular there).
struct TensorGrid {
  int dim = 0;
  std::array<double, kMaxDim> half_extent{};  // L_i
  std::array<int, kMaxDim> cells{};           // n_i
  std::array<double, kMaxDim> h{};            // 2 L_i / n_i
  std::array<std::int64_t, kMaxDim> stride{};
  std::int64_t size = 0;

  TensorGrid() = default;
  TensorGrid(int dim_, std::array<double, kMaxDim> L, std::array<int, kMaxDim> n)
      : dim(dim_), half_extent(L), cells(n) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid: 1 <= N <= 3 required");
    for (int i = 0; i < dim; ++i) {
      if (n[i] < 4 || n[i] % 2 != 0)
        throw std::invalid_argument("grid: cell counts must be even and >= 4");
      if (!(L[i] > 0.0)) throw std::invalid_argument("grid: half-extent must be positive");
      h[i] = 2.0 * L[i] / n[i];
    }
    size = 1;
    for (int i = dim - 1; i >= 0; --i) {  // last axis fastest
      stride[i] = size;
      size *= n[i];
    }
  }

  double coord(int axis, int index) const {
    return -half_extent[axis] + (index + 0.5) * h[axis];
  }

  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= h[i];
    return v;
  }

  Point cell_center(std::int64_t flat) const {
    Point p{};
    for (int i = 0; i < dim; ++i) {
      std::int64_t idx = (flat / stride[i]) % cells[i];
      p[i] = coord(i, static_cast<int>(idx));
    }
    return p;
  }

  bool same_shape(const TensorGrid& o) const {
    if (dim != o.dim) return false;
    for (int i = 0; i < dim; ++i)
      if (cells[i] != o.cells[i] || half_extent[i] != o.half_extent[i]) return false;
    return true;
  }
};

inline TensorGrid make_grid_1d(double L, int n) { return TensorGrid(1, {L, 0, 0}, {n, 0, 0}); }
inline TensorGrid make_grid_2d(double Lx, double Ly, int nx, int ny) {
  return TensorGrid(2, {Lx, Ly, 0}, {nx, ny, 0});
}

/// One nonnegative value per cell plus a physical time stamp.
struct ScalarField {
  TensorGrid grid;
  std::vector<double> v;
  double time = 0.0;

  ScalarField() = default;
  explicit ScalarField(const TensorGrid& g, double t = 0.0)
      : grid(g), v(static_cast<size_t>(g.size), 0.0), time(t) {}

  double& operator[](std::int64_t i) { return v[static_cast<size_t>(i)]; }
  double operator[](std::int64_t i) const { return v[static_cast<size_t>(i)]; }
};

/// Axis-aligned box prod_i [a_i, b_i], used as the support K of local-mass
/// probes.
struct Box {
  int dim = 0;
  std::array<double, kMaxDim> a{};
  std::array<double, kMaxDim> b{};

  double length(int i) const { return b[i] - a[i]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= length(i);
    return v;
  }
  bool contains(const Point& p) const {
    for (int i = 0; i < dim; ++i)
      if (p[i] < a[i] || p[i] > b[i]) return false;
    return true;
  }
};

inline void check_box(const Box& k) {
  if (k.dim < 1 || k.dim > kMaxDim) throw std::invalid_argument("box: 1 <= N <= 3 required");
  for (int i = 0; i < k.dim; ++i)
    if (!(k.a[i] < k.b[i])) throw std::invalid_argument("box: a_i < b_i required");
}

/// Samples a pointwise function at cell centers. Negative round-off is
/// clamped to zero; NaN or infinite samples are an error.
inline ScalarField sample(const std::function<double(const Point&)>& f, const TensorGrid& g,
                          double t = 0.0) {
  ScalarField u(g, t);
  for (std::int64_t i = 0; i < g.size; ++i) {
    double val = f(g.cell_center(i));
    if (!std::isfinite(val))
      throw std::domain_error("sample: non-finite value at cell " + std::to_string(i));
    u[i] = std::max(val, 0.0);
  }
  return u;
}

// Midpoint-rule reductions. Summation order is the fixed flat-index order,
// so repeated runs give bit-identical results.

inline double mass(const ScalarField& u) {
  double s = 0.0;
  for (double x : u.v) s += x;
  return s * u.grid.cell_volume();
}

inline double lp_norm(const ScalarField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p >= 1 required");
  double s = 0.0;
  for (double x : u.v) s += std::pow(std::abs(x), p);
  return std::pow(s * u.grid.cell_volume(), 1.0 / p);
}

inline double sup_norm(const ScalarField& u) {
  double s = 0.0;
  for (double x : u.v) s = std::max(s, std::abs(x));
  return s;
}

inline double local_mass(const ScalarField& u, const Box& k) {
  check_box(k);
  // piecewise-constant interpretation: each cell contributes the overlap of
  // its box with k, so indicator data integrates exactly
  double s = 0.0;
  for (std::int64_t i = 0; i < u.grid.size; ++i) {
    const Point c = u.grid.cell_center(i);
    double frac = 1.0;
    for (int d = 0; d < u.grid.dim; ++d) {
      const double half = 0.5 * u.grid.h[d];
      const double ov = std::min(k.b[d], c[d] + half) - std::max(k.a[d], c[d] - half);
      if (ov <= 0.0) {
        frac = 0.0;
        break;
      }
      frac *= std::min(ov, u.grid.h[d]) / u.grid.h[d];
    }
    s += u[i] * frac;
  }
  return s * u.grid.cell_volume();
}

/// Ghost-cell policy at the domain boundary.
enum class GhostKind { ZeroDirichlet, Reflect, Dirichlet };

struct GhostPolicy {
  GhostKind kind = GhostKind::ZeroDirichlet;
  // For Dirichlet: sampler evaluated at the ghost cell center.
  std::function<double(const Point&, double)> value;
};

inline GhostPolicy ghost_zero() { return {GhostKind::ZeroDirichlet, nullptr}; }
inline GhostPolicy ghost_reflect() { return {GhostKind::Reflect, nullptr}; }
inline GhostPolicy ghost_dirichlet(std::function<double(const Point&, double)> f) {
  return {GhostKind::Dirichlet, std::move(f)};
}

namespace detail {

// Visits every grid line along `axis`: calls fn(base, stride, count) where
// cell j of the line has flat index base + j*stride.
template <class Fn>
inline void for_each_line(const TensorGrid& g, int axis, Fn&& fn) {
  const std::int64_t stride = g.stride[axis];
  const int count = g.cells[axis];
  const std::int64_t lines = g.size / count;
  for (std::int64_t l = 0; l < lines; ++l) {
    // decompose l over the other axes to get the base flat index
    std::int64_t base = 0, rem = l;
    for (int i = g.dim - 1; i >= 0; --i) {
      if (i == axis) continue;
      std::int64_t idx = rem % g.cells[i];
      rem /= g.cells[i];
      base += idx * g.stride[i];
    }
    fn(base, stride, count);
  }
}

inline double ghost_value(const GhostPolicy& bc, const ScalarField& w, int axis,
                          std::int64_t inner_flat, bool high_side) {
  switch (bc.kind) {
    case GhostKind::ZeroDirichlet:
      return 0.0;
    case GhostKind::Reflect:
      return w[inner_flat];
    case GhostKind::Dirichlet: {
      Point p = w.grid.cell_center(inner_flat);
      p[axis] += (high_side ? 1.0 : -1.0) * w.grid.h[axis];
      return bc.value(p, w.time);
    }
  }
  return 0.0;
}

}  // namespace detail

/// Standard 3-point second difference along one axis; boundary rows use the
/// ghost value supplied by `bc`.
inline ScalarField second_difference(const ScalarField& w, int axis, const GhostPolicy& bc) {
  ScalarField out(w.grid, w.time);
  const double inv_h2 = 1.0 / (w.grid.h[axis] * w.grid.h[axis]);
  detail::for_each_line(w.grid, axis, [&](std::int64_t base, std::int64_t stride, int n) {
    for (int j = 0; j < n; ++j) {
      const std::int64_t c = base + j * stride;
      const double lo = (j == 0) ? detail::ghost_value(bc, w, axis, c, false) : w[c - stride];
      const double hi =
          (j == n - 1) ? detail::ghost_value(bc, w, axis, c, true) : w[c + stride];
      out[c] = (lo - 2.0 * w[c] + hi) * inv_h2;
    }
  });
  return out;
}

/// First-order donor-cell discretization of c * d/dy_i (y_i v), the confining
/// drift of the rescaled equation (c = alpha sigma_i >= 0). The advection
/// velocity is -c y_i (toward the origin); boundary faces take zero inflow,
/// so the total sum telescopes to zero and the operator is conservative.
inline ScalarField upwind_drift_divergence(const ScalarField& v, int axis, double c) {
  if (c < 0.0) throw std::invalid_argument("upwind_drift_divergence: c >= 0 required");
  ScalarField out(v.grid, v.time);
  const double h = v.grid.h[axis];
  const double inv_h = 1.0 / h;
  detail::for_each_line(v.grid, axis, [&](std::int64_t base, std::int64_t stride, int n) {
    // G_{j+1/2} = c * y_face * v_donor, donor = cell the inward flow leaves.
    double g_lo = 0.0;  // face at j - 1/2; zero inflow at the low boundary
    for (int j = 0; j < n; ++j) {
      const std::int64_t cc = base + j * stride;
      double g_hi;
      if (j == n - 1) {
        g_hi = 0.0;  // zero inflow at the high boundary
      } else {
        const double y_face = v.grid.coord(axis, j) + 0.5 * h;
        const double donor = (y_face > 0.0) ? v[cc + stride] : v[cc];
        g_hi = c * y_face * donor;
      }
      out[cc] = (g_hi - g_lo) * inv_h;
      g_lo = g_hi;
    }
  });
  return out;
}

/// Multilinear interpolation of a field at an arbitrary point. Points beyond
/// the outermost cell centers clamp to the boundary cell along that axis.
inline double interpolate(const ScalarField& u, const Point& p) {
  const TensorGrid& g = u.grid;
  std::array<int, kMaxDim> i0{};
  std::array<double, kMaxDim> w{};
  for (int a = 0; a < g.dim; ++a) {
    double s = (p[a] + g.half_extent[a]) / g.h[a] - 0.5;
    double fl = std::floor(s);
    int i = static_cast<int>(fl);
    double frac = s - fl;
    if (i < 0) {
      i = 0;
      frac = 0.0;
    } else if (i >= g.cells[a] - 1) {
      i = g.cells[a] - 2;
      frac = 1.0;
    }
    i0[a] = i;
    w[a] = frac;
  }
  double acc = 0.0;
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    double wt = 1.0;
    std::int64_t flat = 0;
    for (int a = 0; a < g.dim; ++a) {
      const int bit = (c >> a) & 1;
      wt *= bit ? w[a] : (1.0 - w[a]);
      flat += static_cast<std::int64_t>(i0[a] + bit) * g.stride[a];
    }
    acc += wt * u[flat];
  }
  return acc;
}

}  // namespace afd

#pragma once

// Change to/from self-similar variables on grid data:
//   v(y, tau) = (t+t0)^alpha u(x, t),  y_i = x_i (t+t0)^{-sigma_i alpha},
//   tau = log(t+t0).
// The grid is rescaled together with the values (the target grid is the image
// grid), so the transform is algebraic and preserves the discrete mass
// exactly.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "afd/grid.hpp"
#include "afd/similarity.hpp"

namespace afd {

inline std::pair<ScalarField, double> to_selfsimilar(const ScalarField& u,
                                                     const RescaleMap& map) {
  const double ts = u.time + map.t0;
  if (!(ts > 0.0)) throw std::domain_error("to_selfsimilar: t + t0 must be positive");
  const double tau = std::log(ts);
  TensorGrid g = u.grid;
  for (int i = 0; i < g.dim; ++i) {
    const double scale = std::pow(ts, -map.se.sigma[i] * map.se.alpha);
    g.half_extent[i] *= scale;
    g.h[i] *= scale;
  }
  ScalarField v(g, tau);
  const double amp = std::pow(ts, map.se.alpha);
  for (std::int64_t i = 0; i < g.size; ++i) v[i] = u[i] * amp;
  v.time = tau;
  return {std::move(v), tau};
}

inline std::pair<ScalarField, double> from_selfsimilar(const ScalarField& v, double tau,
                                                       const RescaleMap& map) {
  const double ts = std::exp(tau);
  const double t = ts - map.t0;
  TensorGrid g = v.grid;
  for (int i = 0; i < g.dim; ++i) {
    const double scale = std::pow(ts, map.se.sigma[i] * map.se.alpha);
    g.half_extent[i] *= scale;
    g.h[i] *= scale;
  }
  ScalarField u(g, t);
  const double amp = std::pow(ts, -map.se.alpha);
  for (std::int64_t i = 0; i < g.size; ++i) u[i] = v[i] * amp;
  return {std::move(u), t};
}

}  // namespace afd

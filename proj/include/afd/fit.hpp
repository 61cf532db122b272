#pragma once

// Log-log least-squares power-law fitting for the experiment harness.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace afd {

struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log of the prefactor
  double residual = 0.0;   // RMS residual in log space
  std::size_t points = 0;
  double x_min = 0.0, x_max = 0.0;
};

/// Least squares of log y against log x. Requires at least 5 strictly
/// positive samples spanning a factor >= min_span in the abscissa (default 4;
/// narrow-annulus fits that measure a local slope may relax this).
inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series,
                                 double min_span = 4.0) {
  if (series.size() < 5)
    throw std::invalid_argument("fit_power_law: at least 5 points required");
  double xmin = series.front().first, xmax = series.front().first;
  for (const auto& [x, y] : series) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("fit_power_law: data must be strictly positive");
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (!(xmax >= min_span * xmin))
    throw std::invalid_argument("fit_power_law: fit window too narrow in x");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(series.size());
  for (const auto& [x, y] : series) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  PowerLawFit f;
  f.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.exponent * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : series) {
    const double r = std::log(y) - (f.intercept + f.exponent * std::log(x));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.points = series.size();
  f.x_min = xmin;
  f.x_max = xmax;
  return f;
}

/// Restricts a series to [lo, hi] in the abscissa.
inline std::vector<std::pair<double, double>> window(
    const std::vector<std::pair<double, double>>& series, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : series)
    if (p.first >= lo && p.first <= hi) out.push_back(p);
  return out;
}

}  // namespace afd

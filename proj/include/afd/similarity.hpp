#pragma once

// Exponent hypotheses, self-similarity algebra, and the change to/from
// self-similar variables for the anisotropic fast diffusion equation
//   u_t = sum_i (u^{m_i})_{x_i x_i},   0 < m_i < 1.

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace afd {

/// Thrown when the diffusion exponents violate the admissibility hypotheses.
/// Carries the full list of violated constraints.
class ExponentError : public std::invalid_argument {
 public:
  explicit ExponentError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += "; ";
      s += e;
    }
    return s;
  }
  std::vector<std::string> violations_;
};

/// Diffusion exponents m_1..m_N plus the derived mean and critical exponent.
struct MediumExponents {
  int dim = 0;
  std::vector<double> m;
  double mbar = 0.0;   // mean of m
  double mcrit = 0.0;  // 1 - 2/N

  bool isotropic() const {
    for (double mi : m)
      if (mi != m[0]) return false;
    return true;
  }
};

/// Checks (H1) 0 < m_i < 1 for all i and (H2) sum m_i > N - 2.
/// Returns the list of violated constraints; empty means admissible.
/// Inequalities are strict with no epsilon slack: the admissible range is open.
inline std::vector<std::string> check_exponents(int dim, const std::vector<double>& m) {
  std::vector<std::string> bad;
  if (dim < 1) bad.push_back("dimension must be >= 1, got " + std::to_string(dim));
  if (static_cast<int>(m.size()) != dim && dim >= 1)
    bad.push_back("expected " + std::to_string(dim) + " exponents, got " +
                  std::to_string(m.size()));
  for (size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0 && m[i] < 1.0)) {
      std::ostringstream os;
      os << "H1 violation on axis " << (i + 1) << ": m_" << (i + 1) << " = " << m[i]
         << " not in (0,1)";
      bad.push_back(os.str());
    }
  }
  if (dim >= 1 && static_cast<int>(m.size()) == dim) {
    double sum = std::accumulate(m.begin(), m.end(), 0.0);
    if (!(sum > dim - 2.0)) {
      std::ostringstream os;
      os << "H2 violation: sum m_i = " << sum << " <= N - 2 = " << (dim - 2);
      bad.push_back(os.str());
    }
  }
  return bad;
}

/// Validates and builds a MediumExponents; throws ExponentError listing all
/// violated constraints otherwise.
inline MediumExponents validate_exponents(int dim, const std::vector<double>& m) {
  auto bad = check_exponents(dim, m);
  if (!bad.empty()) throw ExponentError(std::move(bad));
  MediumExponents me;
  me.dim = dim;
  me.m = m;
  me.mbar = std::accumulate(m.begin(), m.end(), 0.0) / dim;
  me.mcrit = 1.0 - 2.0 / dim;
  return me;
}

/// The complete scaling algebra derived from the exponents.
///
/// alpha   = N / (N(mbar-1) + 2)
/// sigma_i = 1/N + (mbar - m_i)/2,  sum sigma_i = 1
/// a_i     = sigma_i * alpha,       alpha(m_i-1) + 2 a_i = 1
/// gamma_i = (1 - m_i)/2            (change-of-mass space rescale)
/// mu_i    = 1/(1 - m_i)            (axis tail exponents are -2 mu_i)
/// delta_i = mu_i                   (axis time exponent; re-derived as
///                                   2 sigma_i alpha mu_i - alpha)
/// beta    = 1 - N(1-mbar)/2 = 1 - sum gamma_i  (mass-change exponent)
struct SimilarityExponents {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> sigma, a, gamma, mu, delta;
};

inline SimilarityExponents derive_similarity(const MediumExponents& me) {
  const int n = me.dim;
  SimilarityExponents se;
  se.alpha = n / (n * (me.mbar - 1.0) + 2.0);
  se.sigma.resize(n);
  se.a.resize(n);
  se.gamma.resize(n);
  se.mu.resize(n);
  se.delta.resize(n);
  double gamma_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    se.sigma[i] = 1.0 / n + (me.mbar - me.m[i]) / 2.0;
    se.a[i] = se.sigma[i] * se.alpha;
    se.gamma[i] = (1.0 - me.m[i]) / 2.0;
    se.mu[i] = 1.0 / (1.0 - me.m[i]);
    se.delta[i] = se.mu[i];
    gamma_sum += se.gamma[i];
  }
  se.beta = 1.0 - gamma_sum;  // identically 1 - N(1-mbar)/2
  return se;
}

/// Reference frame for the self-similar change of variables, with the free
/// time shift t0 >= 0.
struct RescaleMap {
  SimilarityExponents se;
  double t0 = 0.0;
};

inline RescaleMap make_rescale_map(const MediumExponents& me, double t0 = 0.0) {
  if (t0 < 0.0) throw std::invalid_argument("time shift t0 must be >= 0");
  return RescaleMap{derive_similarity(me), t0};
}

}  // namespace afd

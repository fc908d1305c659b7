#include "schedmech/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace schedmech {

GaussLegendreRule gauss_legendre_unit(int points) {
  if (points < 1 || points > 4096) {
    throw std::invalid_argument("gauss_legendre_unit: points must be in [1, 4096]");
  }
  const int m = points;
  GaussLegendreRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  // Roots of the degree-m Legendre polynomial by Newton iteration on the
  // three-term recurrence, seeded with the Chebyshev angle estimate. Roots
  // come in +/- pairs, so only half need solving.
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      deriv = m * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / deriv;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    // Map (-1, 1) onto (0, 1); the descending z sequence lands ascending
    // in x, and the mirrored root fills the slot from the far end.
    const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
    rule.nodes[i] = (1.0 - z) / 2.0;
    rule.weights[i] = w / 2.0;
    rule.nodes[m - 1 - i] = (1.0 + z) / 2.0;
    rule.weights[m - 1 - i] = w / 2.0;
  }
  return rule;
}

const GaussLegendreRule& gauss_legendre_cached(int points) {
  thread_local std::unordered_map<int, GaussLegendreRule> cache;
  auto it = cache.find(points);
  if (it == cache.end()) {
    it = cache.emplace(points, gauss_legendre_unit(points)).first;
  }
  return it->second;
}

}  // namespace schedmech

#pragma once

#include <vector>

namespace schedmech {

// Gauss-Legendre rule mapped to the unit interval (0, 1).
// An m-point rule integrates polynomials up to degree 2m-1 exactly.
struct GaussLegendreRule {
  std::vector<double> nodes;    // strictly inside (0, 1), ascending
  std::vector<double> weights;  // positive, sum to 1
};

// Computes the m-point rule from scratch. Throws std::invalid_argument
// unless 1 <= points <= 4096.
GaussLegendreRule gauss_legendre_unit(int points);

// Same rule served from a per-thread cache, for hot loops that request the
// same sizes over and over. The reference stays valid for the thread's life.
const GaussLegendreRule& gauss_legendre_cached(int points);

}  // namespace schedmech

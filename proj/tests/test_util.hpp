#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "schedmech/rng.hpp"

namespace schedmech::testutil {

// Costs spread log-uniformly over [lo, hi]; the workhorse instance
// generator for equivalence and property tests.
inline std::vector<double> log_uniform_costs(std::mt19937_64& rng, int n,
                                             double lo, double hi) {
  std::vector<double> costs(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    costs[i] = std::exp(llo + (lhi - llo) * uniform01(rng));
  }
  return costs;
}

// Log-spaced grid with both endpoints included.
inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                 static_cast<double>(points - 1));
  }
  return grid;
}

}  // namespace schedmech::testutil

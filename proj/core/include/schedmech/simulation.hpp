#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "schedmech/bounds.hpp"
#include "schedmech/distributions.hpp"

namespace schedmech {

struct SimulationConfig {
  DistributionSpec spec;
  int n = 2;                   // machines per instance, 2 <= n <= kMaxMachines
  std::int64_t trials = 1;     // independent instances to draw
  std::uint64_t seed = 0;
  int workers = 1;             // threads; must not affect the estimate
  // Refuse configs that would draw more costs than this, as a guard against
  // accidentally frozen sessions from an oversized trials * n.
  std::int64_t max_cost_draws = 1'000'000'000;
};

// Monte Carlo estimate of the average approximation ratio, with the
// diagnostics needed to compare against the distribution-independent bound.
struct RatioEstimate {
  int n;
  double mean_ratio;
  double std_error;             // 0 when trials == 1
  std::int64_t trials;
  double threshold_event_freq;  // fraction of trials where >= half the costs
                                // were at or below h * t_min
  std::int64_t cap_violations;  // trials with social cost above (2h+1) * t1
  double max_ratio_seen;
  double h;                     // threshold multiple used for the flags
  double ratio_bound;           // 2h + 1.33
};

// Estimates E[ social_cost / optimal_cost ] over i.i.d. cost draws.
// Per-instance expected social cost is computed exactly, so the only noise
// is the draw of the cost vectors. The sampled instances depend on
// (seed, trials, n, spec) but never on workers.
RatioEstimate estimate_average_ratio(const SimulationConfig& config);

// Observed frequency of the threshold event next to its exact probability
// under the sampling law.
struct EventFrequency {
  double freq;
  double prob_exact;
  std::int64_t trials;
};

// Counts how often at least half of n drawn costs land at or below
// h * t_min, and computes the exact binomial probability to compare.
EventFrequency estimate_event_frequency(const SimulationConfig& config, double h);

// Draws trials instances and returns per-instance outcomes with threshold
// flags, in trial order. Same derivation of per-trial generators as
// estimate_average_ratio, so trial j sees the same costs in both.
std::vector<FlaggedOutcome> collect_outcomes(const SimulationConfig& config,
                                             double h);

// Deterministic worst-case probe: ratio of the two-cost instance
// (epsilon, 1, 1, ..., 1) which approaches (n + 1) / 2 as epsilon -> 0.
struct SweepPoint {
  double epsilon;
  double ratio;
  double limit;  // (n + 1) / 2
};

// Requires n >= 2 and every epsilon in (0, 1].
std::vector<SweepPoint> worst_case_sweep(int n, std::span<const double> epsilons);

// Runs estimate_average_ratio for each instance size with shared seed and
// trial count; results come back sorted by n ascending.
std::vector<RatioEstimate> n_sweep(const DistributionSpec& spec,
                                   std::span<const int> sizes,
                                   std::int64_t trials_per_n,
                                   std::uint64_t seed, int workers = 1);

}  // namespace schedmech

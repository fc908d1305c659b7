#pragma once

#include <cstdint>
#include <span>

#include "schedmech/mechanism.hpp"

namespace schedmech {

// Exact binomial coefficient in 64-bit integer arithmetic. Valid for
// 0 <= k <= n <= 64; the largest case C(64, 32) still fits in a uint64_t.
std::uint64_t binomial_exact_u64(int n, int k);

// Central binomial coefficient C(n, n/2) next to its Robbins-style upper
// bound (e / (pi sqrt(n))) * 2^n, in both direct and log form. The direct
// values are exact integers for n <= 64 and lgamma-based beyond that; the
// log forms stay finite through n = 1024 where 2^n alone would overflow.
struct CentralBinomial {
  int n;
  double exact;         // C(n, n/2)
  double robbins_bound; // (e / (pi sqrt(n))) * 2^n
  double log_exact;     // ln C(n, n/2)
  double log_robbins;   // ln of the bound
};

// Requires even n in [2, 1024]; throws std::invalid_argument otherwise.
CentralBinomial central_binomial(int n);

// Probability that at least half the machines draw a cost at or below the
// threshold, when each lands there independently with probability q.
struct ThresholdEventStats {
  int n;
  int k_half;                    // ceil(n / 2), the required count
  double cdf_at_threshold;       // q
  double prob_exact;             // binomial upper tail from k_half
  double asymptotic_lower_bound; // 1 - e / (2 pi n), valid for even n when
                                 // q >= 11/12
};

// Exact tail via log-space binomial terms; accurate to about 1e-12 absolute
// for n <= 256. Requires n >= 2 and q in [0, 1].
ThresholdEventStats threshold_event_probability(int n, double q);

// Largest expected social cost possible once at least half the machines
// cost at most h * t_min, where t1 is the cheapest true cost: (2h + 1) * t1.
double conditional_cost_cap(double h, double t1);

// Distribution-independent ceiling on the average approximation ratio for a
// threshold multiple h, uniform in the number of machines: 2h + 1.33.
double average_ratio_bound(double h);

// Same ceiling with the additive constant not rounded up: 2h + 1 + 3e/(8 pi).
double average_ratio_bound_tight(double h);

// Size-resolved version of the ceiling before taking the worst n:
// 2h + 1 + (e / (4 pi)) * (n + 1) / n. Decreases in n and equals the tight
// constant at n = 2.
double average_ratio_bound_terms(double h, int n);

// One simulated instance outcome plus whether the threshold event held
// (at least half the drawn costs were at or below h * t_min).
struct FlaggedOutcome {
  MechanismOutcome outcome;
  double t1 = 0.0;              // cheapest true cost in the instance
  bool threshold_event = false;
};

struct CapViolationReport {
  std::int64_t violations;  // samples with social_cost > cap + 1e-9
  std::int64_t samples;
  double violation_freq;
  double prob_bound;        // e / (2 pi n), ceiling on the violation rate
};

// Counts cap violations across simulated outcomes and checks them against
// the e / (2 pi n) ceiling. A sample where the threshold event held but the
// cap was still exceeded contradicts the conditional guarantee outright,
// so that raises internal_error rather than being counted.
CapViolationReport cap_violation_check(std::span<const FlaggedOutcome> samples,
                                       double h, int n);

}  // namespace schedmech

#include "schedmech/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "schedmech/errors.hpp"

namespace schedmech {
namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

double lchoose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::uint64_t binomial_exact_u64(int n, int k) {
  if (n < 0 || n > 64 || k < 0 || k > n) {
    throw std::invalid_argument("binomial_exact_u64: need 0 <= k <= n <= 64");
  }
  if (k > n - k) k = n - k;
  // Multiplicative form; every prefix is itself a binomial coefficient, so
  // the division is exact, and the widened intermediate cannot overflow
  // because C(64, 32) * 64 still fits in 128 bits with room to spare.
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(acc);
}

CentralBinomial central_binomial(int n) {
  if (n < 2 || n > 1024 || n % 2 != 0) {
    throw std::invalid_argument("central_binomial: n must be even and in [2, 1024]");
  }
  CentralBinomial out;
  out.n = n;
  out.log_exact = std::lgamma(n + 1.0) - 2.0 * std::lgamma(n / 2 + 1.0);
  out.exact = n <= 64 ? static_cast<double>(binomial_exact_u64(n, n / 2))
                      : std::exp(out.log_exact);
  // Assembled in log space; the 2^n factor alone would overflow a double
  // from n = 1024 onward.
  out.log_robbins = 1.0 - std::log(kPi) - 0.5 * std::log(static_cast<double>(n)) +
                    n * std::numbers::ln2;
  out.robbins_bound = std::exp(out.log_robbins);
  return out;
}

ThresholdEventStats threshold_event_probability(int n, double q) {
  if (n < 2 || n > kMaxMachines) {
    throw std::invalid_argument("threshold_event_probability: n must be in [2, " +
                                std::to_string(kMaxMachines) + "]");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("threshold_event_probability: q must lie in [0, 1]");
  }
  ThresholdEventStats out;
  out.n = n;
  out.k_half = (n + 1) / 2;
  out.cdf_at_threshold = q;
  if (q <= 0.0) {
    out.prob_exact = 0.0;
  } else if (q >= 1.0) {
    out.prob_exact = 1.0;
  } else {
    // Upper binomial tail, term by term in log space with compensated
    // summation. Good to about 1e-12 absolute through n = 256; lgamma
    // rounding grows mildly past that.
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    double sum = 0.0;
    double comp = 0.0;
    for (int k = out.k_half; k <= n; ++k) {
      const double term = std::exp(lchoose(n, k) + k * lq + (n - k) * l1q);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    out.prob_exact = std::min(sum, 1.0);
  }
  out.asymptotic_lower_bound = 1.0 - kE / (2.0 * kPi * n);
  return out;
}

double conditional_cost_cap(double h, double t1) {
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("conditional_cost_cap: h must be finite and >= 1");
  }
  if (!(std::isfinite(t1) && t1 > 0.0)) {
    throw std::invalid_argument(
        "conditional_cost_cap: t1 must be finite and strictly positive");
  }
  return (2.0 * h + 1.0) * t1;
}

double average_ratio_bound(double h) {
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("average_ratio_bound: h must be finite and >= 1");
  }
  return 2.0 * h + 1.33;
}

double average_ratio_bound_tight(double h) {
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("average_ratio_bound_tight: h must be finite and >= 1");
  }
  return 2.0 * h + 1.0 + 3.0 * kE / (8.0 * kPi);
}

double average_ratio_bound_terms(double h, int n) {
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("average_ratio_bound_terms: h must be finite and >= 1");
  }
  if (n < 2) {
    throw std::invalid_argument("average_ratio_bound_terms: n must be >= 2");
  }
  return 2.0 * h + 1.0 +
         kE / (4.0 * kPi) * (static_cast<double>(n) + 1.0) / static_cast<double>(n);
}

CapViolationReport cap_violation_check(std::span<const FlaggedOutcome> samples,
                                       double h, int n) {
  if (samples.empty()) {
    throw std::invalid_argument("cap_violation_check: no samples");
  }
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("cap_violation_check: h must be finite and >= 1");
  }
  if (n < 2) {
    throw std::invalid_argument("cap_violation_check: n must be >= 2");
  }
  std::int64_t violations = 0;
  std::size_t index = 0;
  for (const FlaggedOutcome& s : samples) {
    const double cap = conditional_cost_cap(h, s.t1);
    const bool violated = s.outcome.social_cost > cap + 1e-9;
    if (violated && s.threshold_event) {
      throw internal_error(
          "cap_violation_check: cap exceeded although the threshold event held "
          "(sample " + std::to_string(index) + ")");
    }
    violations += violated ? 1 : 0;
    ++index;
  }
  CapViolationReport report;
  report.violations = violations;
  report.samples = static_cast<std::int64_t>(samples.size());
  report.violation_freq =
      static_cast<double>(violations) / static_cast<double>(samples.size());
  report.prob_bound = kE / (2.0 * kPi * n);
  return report;
}

}  // namespace schedmech

#include "schedmech/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "schedmech/errors.hpp"
#include "schedmech/quadrature.hpp"

namespace schedmech {
namespace {

void check_costs(const std::vector<double>& costs) {
  if (costs.size() < 2) {
    throw std::invalid_argument("CostVector: need at least 2 machines");
  }
  if (costs.size() > static_cast<std::size_t>(kMaxMachines)) {
    throw std::invalid_argument("CostVector: more than " +
                                std::to_string(kMaxMachines) + " machines");
  }
  for (double c : costs) {
    if (!(std::isfinite(c) && c > 0.0)) {
      throw std::invalid_argument(
          "CostVector: costs must be finite and strictly positive");
    }
  }
}

struct SortedView {
  std::vector<double> sorted;       // costs ascending
  std::vector<std::size_t> order;   // order[rank] = original index
};

SortedView sort_costs(const std::vector<double>& costs) {
  SortedView view;
  view.order.resize(costs.size());
  std::iota(view.order.begin(), view.order.end(), std::size_t{0});
  std::stable_sort(view.order.begin(), view.order.end(),
                   [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  view.sorted.reserve(costs.size());
  for (std::size_t idx : view.order) view.sorted.push_back(costs[idx]);
  return view;
}

// The integrands below are polynomials of degree at most n - 1, so a rule
// with ceil(n / 2) + 1 points (exact through degree n + 1) evaluates every
// integral exactly up to rounding.
int rule_points(std::size_t n) {
  return static_cast<int>((n + 1) / 2 + 1);
}

// Shared clamp and sum check. Raw values may stick out of [0, 1] by a few
// ulps; anything beyond 1e-12 per entry or 1e-9 in the sum means a bug, not
// rounding, and is reported as such.
void finalize_probs(std::vector<double>& p, const char* who) {
  double sum = 0.0;
  for (double& v : p) {
    if (!(v > -1e-12 && v < 1.0 + 1e-12)) {
      throw internal_error(std::string(who) + ": probability " +
                           std::to_string(v) + " outside [0, 1]");
    }
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw internal_error(std::string(who) + ": probabilities sum to " +
                         std::to_string(sum));
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& v : p) v /= sum;
  }
}

// Allocation rule on sorted costs t[0] <= ... <= t[n-1]:
//
//   p[0] = (1 / t[0]) * Int_0^t0 Prod_{i>=1} (1 - y / t[i]) dy
//   p[k] = (1 / (t[0] t[k])) * Int_0^t0 (t0 - x) Prod_{i>=1, i!=k} (1 - x / t[i]) dx
//
// where the p[k] form is the inner-integral collapse of the nested double
// integral over 0 < x < y < t0. Every factor (1 - x / t[i]) stays strictly
// positive because the nodes satisfy x < t[0] <= t[i], so the leave-one-out
// products can be recovered from the full product by one division.
std::vector<double> allocate_sorted(std::span<const double> t) {
  const std::size_t n = t.size();
  const GaussLegendreRule& rule = gauss_legendre_cached(rule_points(n));
  const double t0 = t[0];

  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / t[i];

  std::vector<double> p(n, 0.0);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double x = t0 * rule.nodes[j];
    const double w = rule.weights[j];
    double prod = 1.0;
    for (std::size_t i = 1; i < n; ++i) prod *= 1.0 - x * inv[i];
    p[0] += w * prod;
    const double outer = w * (t0 - x) * prod;
    for (std::size_t i = 1; i < n; ++i) {
      p[i] += outer / (1.0 - x * inv[i]);
    }
  }
  // The substitution x = t0 * u already absorbed one 1/t0 factor into the
  // unit-interval weights; what is left is the per-machine 1/t[k].
  for (std::size_t i = 1; i < n; ++i) p[i] *= inv[i];
  return p;
}

std::vector<double> unsort(const std::vector<double>& sorted_values,
                           const std::vector<std::size_t>& order) {
  std::vector<double> out(sorted_values.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    out[order[rank]] = sorted_values[rank];
  }
  return out;
}

}  // namespace

CostVector::CostVector(std::vector<double> costs) : costs_(std::move(costs)) {
  check_costs(costs_);
}

AllocationProbabilities allocate(const CostVector& costs) {
  SortedView view = sort_costs(costs.values());
  std::vector<double> p = allocate_sorted(view.sorted);
  finalize_probs(p, "allocate");
  return AllocationProbabilities{unsort(p, view.order)};
}

AllocationProbabilities allocate_oracle(const CostVector& costs) {
  const std::size_t n = costs.size();
  if (n > static_cast<std::size_t>(kMaxOracleMachines)) {
    throw std::invalid_argument("allocate_oracle: supports at most " +
                                std::to_string(kMaxOracleMachines) + " machines");
  }
  SortedView view = sort_costs(costs.values());
  const std::vector<double>& t = view.sorted;
  const double t0 = t[0];

  // Elementary symmetric polynomials e[j] of the reciprocals 1/t[1..n-1];
  // the in-place update runs j high to low so each factor enters once.
  std::vector<double> e(n, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = 1.0 / t[i];
    for (std::size_t j = i; j >= 1; --j) e[j] += r * e[j - 1];
  }

  // Integrating the expanded product term by term:
  //   p[0] = Sum_j (-1)^j e[j] t0^j / (j + 1)
  //   p[k] = (t0 / t[k]) Sum_j (-1)^j e_without_k[j] t0^j / ((j + 1)(j + 2))
  std::vector<double> p(n, 0.0);
  {
    double sum = 0.0;
    double sign = 1.0;
    double t0_pow = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += sign * e[j] * t0_pow / static_cast<double>(j + 1);
      sign = -sign;
      t0_pow *= t0;
    }
    p[0] = sum;
  }
  std::vector<double> ek(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double r = 1.0 / t[k];
    ek[0] = 1.0;
    for (std::size_t j = 1; j <= n - 2; ++j) ek[j] = e[j] - r * ek[j - 1];
    double sum = 0.0;
    double sign = 1.0;
    double t0_pow = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      sum += sign * ek[j] * t0_pow /
             static_cast<double>((j + 1) * (j + 2));
      sign = -sign;
      t0_pow *= t0;
    }
    p[k] = sum * t0 * r;
  }
  finalize_probs(p, "allocate_oracle");
  return AllocationProbabilities{unsort(p, view.order)};
}

namespace detail {

MechanismOutcome social_cost_sorted(std::span<const double> t) {
  const std::size_t n = t.size();
  const GaussLegendreRule& rule = gauss_legendre_cached(rule_points(n));
  const double t0 = t[0];

  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / t[i];

  // Sum_k p[k] t[k] collapses to two integrals of the full product P(x):
  //   t0 * Int P  +  Int (t0 - x) P(x) Sum_{i>=1} 1 / (1 - x / t[i])
  // because multiplying p[k] by t[k] cancels the 1/t[k] factor, leaving the
  // same leave-one-out integrand summed over k.
  double acc1 = 0.0;
  double acc2 = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double x = t0 * rule.nodes[j];
    const double w = rule.weights[j];
    double prod = 1.0;
    double sum_inv = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double f = 1.0 - x * inv[i];
      prod *= f;
      sum_inv += 1.0 / f;
    }
    acc1 += w * prod;
    acc2 += w * (t0 - x) * prod * sum_inv;
  }

  MechanismOutcome out;
  out.social_cost = t0 * acc1 + acc2;
  out.optimal_cost = t0;
  const double ratio = out.social_cost / t0;
  const double worst = (static_cast<double>(n) + 1.0) / 2.0;
  if (ratio > worst + 1e-9) {
    throw internal_error("social_cost: ratio " + std::to_string(ratio) +
                         " above the (n + 1) / 2 ceiling for n = " +
                         std::to_string(n));
  }
  out.ratio = std::max(ratio, 1.0);
  return out;
}

}  // namespace detail

MechanismOutcome social_cost(const CostVector& costs) {
  SortedView view = sort_costs(costs.values());
  return detail::social_cost_sorted(view.sorted);
}

DeviationReport deviation_cost(const CostVector& costs, std::size_t machine,
                               double declared_cost) {
  if (machine >= costs.size()) {
    throw std::invalid_argument("deviation_cost: machine index out of range");
  }
  if (!(std::isfinite(declared_cost) && declared_cost > 0.0)) {
    throw std::invalid_argument(
        "deviation_cost: declared cost must be finite and strictly positive");
  }
  const double true_cost = costs[machine];
  const double truthful_p = allocate(costs).probs[machine];

  std::vector<double> deviated = costs.values();
  deviated[machine] = declared_cost;
  const double deviated_p = allocate(CostVector(deviated)).probs[machine];

  DeviationReport report;
  report.machine_index = machine;
  report.true_cost = true_cost;
  report.declared_cost = declared_cost;
  report.truthful_expected_cost = truthful_p * true_cost;
  report.deviated_expected_cost = deviated_p * std::max(true_cost, declared_cost);
  report.profitable =
      report.deviated_expected_cost < report.truthful_expected_cost - 1e-9;
  return report;
}

DeviationReport best_deviation(const CostVector& costs, std::size_t machine,
                               std::span<const double> declared_grid) {
  if (declared_grid.empty()) {
    throw std::invalid_argument("best_deviation: empty declaration grid");
  }
  for (double d : declared_grid) {
    if (!(std::isfinite(d) && d > 0.0)) {
      throw std::invalid_argument(
          "best_deviation: grid entries must be finite and strictly positive");
    }
  }
  DeviationReport best = deviation_cost(costs, machine, declared_grid[0]);
  for (std::size_t i = 1; i < declared_grid.size(); ++i) {
    DeviationReport r = deviation_cost(costs, machine, declared_grid[i]);
    if (r.deviated_expected_cost < best.deviated_expected_cost) best = r;
  }
  return best;
}

}  // namespace schedmech

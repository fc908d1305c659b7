#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace schedmech {

// Hard ceiling on instance size; the allocation rule is O(n^2) and the
// quadrature cache tops out at the matching node count.
inline constexpr int kMaxMachines = 4096;

// The reference evaluator expands symmetric polynomials with alternating
// signs, which loses digits fast; past this size it is not trustworthy.
inline constexpr int kMaxOracleMachines = 32;

// Per-task costs declared by the machines, in the callers' machine order.
// Construction validates; every entry must be finite and strictly positive,
// and 2 <= size <= kMaxMachines. Throws std::invalid_argument otherwise.
class CostVector {
 public:
  explicit CostVector(std::vector<double> costs);

  std::size_t size() const { return costs_.size(); }
  double operator[](std::size_t i) const { return costs_[i]; }
  const std::vector<double>& values() const { return costs_; }

 private:
  std::vector<double> costs_;
};

// Probability that each machine receives the task, aligned with the input
// machine order. Entries lie in [0, 1] and sum to 1 within 1e-12.
struct AllocationProbabilities {
  std::vector<double> probs;
};

// Expected cost of the randomized assignment for one instance, next to the
// cheapest-machine benchmark.
struct MechanismOutcome {
  double social_cost;   // sum over machines of prob * cost
  double optimal_cost;  // min cost in the instance
  double ratio;         // social_cost / optimal_cost, clamped to >= 1
};

// Effect of one machine declaring a cost other than its true one while
// everyone else stays truthful. Expected costs are from that machine's
// point of view: its winning probability times the cost it actually incurs.
struct DeviationReport {
  std::size_t machine_index;
  double true_cost;
  double declared_cost;
  double truthful_expected_cost;
  double deviated_expected_cost;
  bool profitable;  // deviated beats truthful by more than 1e-9
};

// Computes the allocation probabilities for a declared cost vector.
// The rule favors low declarations, but deliberately keeps every machine's
// probability positive so that the expected cost a machine faces can never
// be reduced by inflating its declaration.
AllocationProbabilities allocate(const CostVector& costs);

// Slow reference evaluator for the same rule, written as an independent
// expansion in symmetric polynomials. Only accepts up to
// kMaxOracleMachines machines; agreement is asserted in tests.
AllocationProbabilities allocate_oracle(const CostVector& costs);

// Expected social cost of the allocation on one instance, with the
// optimal (cheapest machine) benchmark and their ratio.
MechanismOutcome social_cost(const CostVector& costs);

// Evaluates one machine's unilateral deviation to declared_cost.
// A winning machine is held to the pace it declared but can never beat its
// true cost, so the cost it incurs is max(true_cost, declared_cost).
DeviationReport deviation_cost(const CostVector& costs, std::size_t machine,
                               double declared_cost);

// Scans a grid of declarations and returns the report for the declaration
// with the lowest expected cost for the machine (first grid point wins
// ties). Grid entries must be finite and positive.
DeviationReport best_deviation(const CostVector& costs, std::size_t machine,
                               std::span<const double> declared_grid);

namespace detail {

// Hot-path variant for callers that already hold sorted costs
// (ascending, validated). Skips re-validation and re-sorting.
MechanismOutcome social_cost_sorted(std::span<const double> sorted_costs);

}  // namespace detail

}  // namespace schedmech

#include "schedmech/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "schedmech/errors.hpp"
#include "schedmech/rng.hpp"
#include "schedmech/streaming_stats.hpp"

namespace schedmech {
namespace {

void validate_config(const SimulationConfig& config) {
  validate(config.spec);
  if (config.n < 2 || config.n > kMaxMachines) {
    throw std::invalid_argument("SimulationConfig: n must be in [2, " +
                                std::to_string(kMaxMachines) + "]");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("SimulationConfig: trials must be >= 1");
  }
  if (config.workers < 1) {
    throw std::invalid_argument("SimulationConfig: workers must be >= 1");
  }
  if (config.max_cost_draws < 1) {
    throw std::invalid_argument("SimulationConfig: max_cost_draws must be >= 1");
  }
  if (config.trials > config.max_cost_draws / config.n) {
    throw std::invalid_argument(
        "SimulationConfig: trials * n exceeds max_cost_draws (" +
        std::to_string(config.max_cost_draws) + " cost draws)");
  }
}

// Runs fn(first, last, slot) over contiguous trial blocks, one per worker
// thread. Results must be keyed by slot and merged in slot order by the
// caller; together with per-trial generators this keeps every estimate
// independent of the worker count. The first failing slot's exception is
// rethrown after all threads joined.
void parallel_trial_blocks(
    std::int64_t trials, int workers,
    const std::function<void(std::int64_t, std::int64_t, int)>& fn) {
  const int used =
      static_cast<int>(std::min<std::int64_t>(workers, trials));
  if (used <= 1) {
    fn(0, trials, 0);
    return;
  }
  const std::int64_t base = trials / used;
  const std::int64_t extra = trials % used;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(used);
  threads.reserve(used);
  std::int64_t start = 0;
  for (int slot = 0; slot < used; ++slot) {
    const std::int64_t len = base + (slot < extra ? 1 : 0);
    const std::int64_t first = start;
    const std::int64_t last = start + len;
    start = last;
    threads.emplace_back([&fn, &errors, slot, first, last] {
      try {
        fn(first, last, slot);
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void draw_costs(const DistributionSpec& spec, int n, std::mt19937_64& rng,
                std::vector<double>& out) {
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = sample(spec, rng);
}

}  // namespace

RatioEstimate estimate_average_ratio(const SimulationConfig& config) {
  validate_config(config);
  const ThresholdChoice threshold = solve_threshold(config.spec);
  const double threshold_cost = threshold.h * config.spec.t_min;
  const int n = config.n;
  const int k_half = (n + 1) / 2;

  std::vector<RunningStats> stats(config.workers);
  std::vector<std::int64_t> events(config.workers, 0);
  std::vector<std::int64_t> violations(config.workers, 0);

  parallel_trial_blocks(
      config.trials, config.workers,
      [&](std::int64_t first, std::int64_t last, int slot) {
        std::vector<double> costs;
        RunningStats local;
        std::int64_t local_events = 0;
        std::int64_t local_violations = 0;
        for (std::int64_t j = first; j < last; ++j) {
          std::mt19937_64 rng =
              trial_rng(config.seed, static_cast<std::uint64_t>(j));
          draw_costs(config.spec, n, rng, costs);
          std::sort(costs.begin(), costs.end());
          const MechanismOutcome outcome = detail::social_cost_sorted(costs);
          local.push(outcome.ratio);
          if (costs[k_half - 1] <= threshold_cost) local_events += 1;
          const double cap = conditional_cost_cap(threshold.h, costs[0]);
          if (outcome.social_cost > cap + 1e-9) local_violations += 1;
        }
        stats[slot] = local;
        events[slot] = local_events;
        violations[slot] = local_violations;
      });

  RunningStats merged;
  std::int64_t total_events = 0;
  std::int64_t total_violations = 0;
  for (int slot = 0; slot < config.workers; ++slot) {
    merged.merge(stats[slot]);
    total_events += events[slot];
    total_violations += violations[slot];
  }

  RatioEstimate estimate;
  estimate.n = n;
  estimate.mean_ratio = merged.mean();
  estimate.std_error = merged.std_error();
  estimate.trials = config.trials;
  estimate.threshold_event_freq =
      static_cast<double>(total_events) / static_cast<double>(config.trials);
  estimate.cap_violations = total_violations;
  estimate.max_ratio_seen = merged.max();
  estimate.h = threshold.h;
  estimate.ratio_bound = threshold.ratio_bound;
  return estimate;
}

EventFrequency estimate_event_frequency(const SimulationConfig& config, double h) {
  validate_config(config);
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("estimate_event_frequency: h must be finite and >= 1");
  }
  const double threshold_cost = h * config.spec.t_min;
  const int n = config.n;
  const int k_half = (n + 1) / 2;

  std::vector<std::int64_t> events(config.workers, 0);
  parallel_trial_blocks(
      config.trials, config.workers,
      [&](std::int64_t first, std::int64_t last, int slot) {
        std::int64_t local_events = 0;
        for (std::int64_t j = first; j < last; ++j) {
          std::mt19937_64 rng =
              trial_rng(config.seed, static_cast<std::uint64_t>(j));
          int below = 0;
          for (int i = 0; i < n; ++i) {
            if (sample(config.spec, rng) <= threshold_cost) below += 1;
          }
          if (below >= k_half) local_events += 1;
        }
        events[slot] = local_events;
      });

  std::int64_t total = 0;
  for (std::int64_t e : events) total += e;

  // Draws always follow the renormalized law, so the exact comparison value
  // uses that convention even when the threshold came from the literal one.
  DistributionSpec sampling_law = config.spec;
  sampling_law.convention = Convention::Renormalized;
  const double q = cdf(sampling_law, threshold_cost);

  EventFrequency out;
  out.freq = static_cast<double>(total) / static_cast<double>(config.trials);
  out.prob_exact = threshold_event_probability(n, q).prob_exact;
  out.trials = config.trials;
  return out;
}

std::vector<FlaggedOutcome> collect_outcomes(const SimulationConfig& config,
                                             double h) {
  validate_config(config);
  if (!(std::isfinite(h) && h >= 1.0)) {
    throw std::invalid_argument("collect_outcomes: h must be finite and >= 1");
  }
  const double threshold_cost = h * config.spec.t_min;
  const int n = config.n;
  const int k_half = (n + 1) / 2;

  std::vector<FlaggedOutcome> outcomes(config.trials);
  parallel_trial_blocks(
      config.trials, config.workers,
      [&](std::int64_t first, std::int64_t last, int) {
        std::vector<double> costs;
        for (std::int64_t j = first; j < last; ++j) {
          std::mt19937_64 rng =
              trial_rng(config.seed, static_cast<std::uint64_t>(j));
          draw_costs(config.spec, n, rng, costs);
          std::sort(costs.begin(), costs.end());
          FlaggedOutcome& slot_out = outcomes[j];
          slot_out.outcome = detail::social_cost_sorted(costs);
          slot_out.t1 = costs[0];
          slot_out.threshold_event = costs[k_half - 1] <= threshold_cost;
        }
      });
  return outcomes;
}

std::vector<SweepPoint> worst_case_sweep(int n, std::span<const double> epsilons) {
  if (n < 2 || n > kMaxMachines) {
    throw std::invalid_argument("worst_case_sweep: n must be in [2, " +
                                std::to_string(kMaxMachines) + "]");
  }
  if (epsilons.empty()) {
    throw std::invalid_argument("worst_case_sweep: no epsilons given");
  }
  const double limit = (static_cast<double>(n) + 1.0) / 2.0;
  std::vector<SweepPoint> points;
  points.reserve(epsilons.size());
  std::vector<double> costs(n, 1.0);
  for (double eps : epsilons) {
    if (!(std::isfinite(eps) && eps > 0.0 && eps <= 1.0)) {
      throw std::invalid_argument("worst_case_sweep: epsilon must lie in (0, 1]");
    }
    costs[0] = eps;  // already sorted: eps <= 1 <= rest
    const MechanismOutcome outcome = detail::social_cost_sorted(costs);
    points.push_back(SweepPoint{eps, outcome.ratio, limit});
  }
  return points;
}

std::vector<RatioEstimate> n_sweep(const DistributionSpec& spec,
                                   std::span<const int> sizes,
                                   std::int64_t trials_per_n,
                                   std::uint64_t seed, int workers) {
  if (sizes.empty()) {
    throw std::invalid_argument("n_sweep: no sizes given");
  }
  std::vector<int> sorted_sizes(sizes.begin(), sizes.end());
  std::sort(sorted_sizes.begin(), sorted_sizes.end());
  std::vector<RatioEstimate> estimates;
  estimates.reserve(sorted_sizes.size());
  for (int n : sorted_sizes) {
    SimulationConfig config;
    config.spec = spec;
    config.n = n;
    config.trials = trials_per_n;
    config.seed = seed;
    config.workers = workers;
    estimates.push_back(estimate_average_ratio(config));
  }
  return estimates;
}

}  // namespace schedmech

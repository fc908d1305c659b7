#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schedmech/bounds.hpp"
#include "schedmech/distributions.hpp"
#include "schedmech/errors.hpp"
#include "schedmech/mechanism.hpp"
#include "schedmech/simulation.hpp"
#include "schedmech/version.hpp"

using nlohmann::ordered_json;
using namespace schedmech;

namespace {

struct CommonOpts {
  std::string format = "json";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--seed", common.seed, "Run seed, echoed into the output")
      ->capture_default_str();
}

Convention to_convention(const std::string& name) {
  return name == "renormalized" ? Convention::Renormalized
                                : Convention::Literal;
}

DistributionSpec make_spec(const std::string& family, double t_min,
                           double shape, const std::string& convention) {
  const auto parsed = parse_family(family);
  if (!parsed) {
    throw std::invalid_argument("unknown family: " + family);
  }
  DistributionSpec spec;
  spec.family = *parsed;
  spec.t_min = t_min;
  spec.shape = shape;
  spec.convention = to_convention(convention);
  return spec;
}

// One scalar cell; numbers keep nlohmann's shortest round-trip rendering so
// JSON and CSV print identical digits.
std::string csv_cell(const ordered_json& value) {
  if (value.is_null()) return "";
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::string to_csv(const ordered_json& result) {
  std::string out;
  for (const auto& [key, value] : result.items()) {
    if (key == "records" || key == "parameters") continue;
    out += "# " + key + "=" + csv_cell(value) + "\n";
  }
  for (const auto& [key, value] : result["parameters"].items()) {
    out += "# " + key + "=" + csv_cell(value) + "\n";
  }
  const auto& records = result["records"];
  if (!records.empty()) {
    std::string header;
    for (const auto& [key, value] : records[0].items()) {
      (void)value;
      if (!header.empty()) header += ",";
      header += key;
    }
    out += header + "\n";
    for (const auto& record : records) {
      std::string line;
      bool first = true;
      for (const auto& [key, value] : record.items()) {
        (void)key;
        if (!first) line += ",";
        first = false;
        line += csv_cell(value);
      }
      out += line + "\n";
    }
  }
  return out;
}

std::string render(const CommonOpts& common, const ordered_json& result) {
  return common.format == "csv" ? to_csv(result) : result.dump(2) + "\n";
}

ordered_json result_shell(const char* command, const CommonOpts& common) {
  ordered_json result;
  result["command"] = command;
  result["tool_version"] = std::string(kVersion);
  result["seed"] = common.seed;
  result["parameters"] = ordered_json::object();
  result["records"] = ordered_json::array();
  return result;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += ordered_json(xs[i]).dump();
  }
  return out;
}

std::vector<double> make_log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && std::isfinite(lo) && hi >= lo && std::isfinite(hi))) {
    throw std::invalid_argument(
        "truthfulness: grid bounds must satisfy 0 < min <= max");
  }
  std::vector<double> grid(points);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                 static_cast<double>(points - 1));
  }
  return grid;
}

struct AllocateCmd {
  CommonOpts common;
  std::vector<double> costs;

  std::string run() const {
    const CostVector cv(costs);
    const AllocationProbabilities alloc = allocate(cv);
    const MechanismOutcome outcome = social_cost(cv);

    ordered_json result = result_shell("allocate", common);
    ordered_json& params = result["parameters"];
    params["n"] = costs.size();
    params["costs"] = join_doubles(costs);
    double sum = 0.0;
    for (double p : alloc.probs) sum += p;
    params["prob_sum"] = sum;
    params["social_cost"] = outcome.social_cost;
    params["optimal_cost"] = outcome.optimal_cost;
    params["ratio"] = outcome.ratio;
    for (std::size_t i = 0; i < costs.size(); ++i) {
      ordered_json row;
      row["index"] = i;
      row["cost"] = costs[i];
      row["probability"] = alloc.probs[i];
      result["records"].push_back(std::move(row));
    }
    return render(common, result);
  }
};

struct SimulateCmd {
  CommonOpts common;
  std::string family;
  double shape = 1.0;
  double t_min = 1.0;
  std::string convention = "literal";
  int n = 2;
  std::int64_t trials = 0;  // resolved below when the flag is absent
  int workers = 1;
  std::int64_t max_cost_draws = 1'000'000'000;
  bool trials_given = false;

  std::int64_t resolved_trials() const {
    if (trials_given) return trials;
    return n <= 64 ? 100000 : 10000;
  }

  std::string run() const {
    SimulationConfig config;
    config.spec = make_spec(family, t_min, shape, convention);
    config.n = n;
    config.trials = resolved_trials();
    config.seed = common.seed;
    config.workers = workers;
    config.max_cost_draws = max_cost_draws;
    const RatioEstimate est = estimate_average_ratio(config);

    ordered_json result = result_shell("simulate", common);
    ordered_json& params = result["parameters"];
    params["family"] = family;
    params["shape"] = shape;
    params["t_min"] = t_min;
    params["convention"] = convention;
    params["workers"] = workers;
    ordered_json row;
    row["n"] = n;
    row["trials"] = est.trials;
    row["mean_ratio"] = est.mean_ratio;
    row["std_error"] = est.std_error;
    row["threshold_event_freq"] = est.threshold_event_freq;
    row["cap_violations"] = est.cap_violations;
    row["max_ratio_seen"] = est.max_ratio_seen;
    row["h"] = est.h;
    row["ratio_bound"] = est.ratio_bound;
    row["bound_satisfied"] = est.mean_ratio <= est.ratio_bound;
    result["records"].push_back(std::move(row));
    return render(common, result);
  }
};

struct BoundsCmd {
  CommonOpts common;
  std::string family;
  double shape = 1.0;
  double t_min = 1.0;
  std::string convention = "literal";
  std::vector<int> sizes;

  std::string run() const {
    const DistributionSpec spec = make_spec(family, t_min, shape, convention);
    const ThresholdChoice threshold = solve_threshold(spec);

    ordered_json result = result_shell("bounds", common);
    ordered_json& params = result["parameters"];
    params["family"] = family;
    params["shape"] = shape;
    params["t_min"] = t_min;
    params["convention"] = convention;
    params["h"] = threshold.h;
    params["cdf_at_threshold"] = threshold.cdf_at_threshold;
    params["ratio_bound"] = threshold.ratio_bound;
    params["ratio_bound_tight"] = average_ratio_bound_tight(threshold.h);

    for (int n : sizes) {
      ordered_json row;
      row["n"] = n;
      if (n % 2 == 0) {
        const CentralBinomial cb = central_binomial(n);
        row["binom_exact"] = cb.exact;
        row["robbins_bound"] = cb.robbins_bound;
      } else {
        row["binom_exact"] = nullptr;
        row["robbins_bound"] = nullptr;
      }
      const ThresholdEventStats stats =
          threshold_event_probability(n, threshold.cdf_at_threshold);
      row["threshold_event_exact"] = stats.prob_exact;
      row["event_lower_bound"] = stats.asymptotic_lower_bound;
      row["worst_case_limit"] = (static_cast<double>(n) + 1.0) / 2.0;
      result["records"].push_back(std::move(row));
    }
    return render(common, result);
  }
};

struct SweepCmd {
  CommonOpts common;
  std::string kind;
  std::string family;
  double shape = 1.0;
  double t_min = 1.0;
  std::string convention = "literal";
  std::vector<int> sizes;
  std::int64_t trials = 10000;
  int workers = 1;
  int n = 2;
  std::vector<double> epsilons;

  std::string run_epsilon() const {
    std::vector<double> eps = epsilons;
    if (eps.empty()) {
      eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    }
    const auto points = worst_case_sweep(n, eps);

    ordered_json result = result_shell("sweep", common);
    ordered_json& params = result["parameters"];
    params["kind"] = "epsilon";
    params["n"] = n;
    for (const SweepPoint& point : points) {
      ordered_json row;
      row["epsilon"] = point.epsilon;
      row["ratio"] = point.ratio;
      row["limit"] = point.limit;
      result["records"].push_back(std::move(row));
    }
    return render(common, result);
  }

  std::string run_sizes() const {
    if (family.empty()) {
      throw std::invalid_argument("sweep --kind n requires --family");
    }
    if (sizes.empty()) {
      throw std::invalid_argument("sweep --kind n requires --n-list");
    }
    const DistributionSpec spec = make_spec(family, t_min, shape, convention);
    const auto estimates = n_sweep(spec, sizes, trials, common.seed, workers);

    ordered_json result = result_shell("sweep", common);
    ordered_json& params = result["parameters"];
    params["kind"] = "n";
    params["family"] = family;
    params["shape"] = shape;
    params["t_min"] = t_min;
    params["convention"] = convention;
    params["trials"] = trials;
    params["workers"] = workers;
    params["h"] = estimates.front().h;
    params["ratio_bound"] = estimates.front().ratio_bound;
    for (const RatioEstimate& est : estimates) {
      ordered_json row;
      row["n"] = est.n;
      row["mean_ratio"] = est.mean_ratio;
      row["std_error"] = est.std_error;
      row["threshold_event_freq"] = est.threshold_event_freq;
      row["max_ratio_seen"] = est.max_ratio_seen;
      row["worst_case_limit"] = (static_cast<double>(est.n) + 1.0) / 2.0;
      row["ratio_bound"] = est.ratio_bound;
      result["records"].push_back(std::move(row));
    }
    return render(common, result);
  }

  std::string run() const {
    return kind == "epsilon" ? run_epsilon() : run_sizes();
  }
};

struct TruthfulnessCmd {
  CommonOpts common;
  std::vector<double> costs;
  int machine = 0;
  int grid_points = 100;
  double grid_min = 0.0;  // 0 = derive from the instance
  double grid_max = 0.0;

  std::string run() const {
    const CostVector cv(costs);
    if (machine < 0 || static_cast<std::size_t>(machine) >= cv.size()) {
      throw std::invalid_argument("truthfulness: machine index out of range");
    }
    const double lo =
        grid_min > 0.0 ? grid_min
                       : *std::min_element(costs.begin(), costs.end()) / 100.0;
    const double hi =
        grid_max > 0.0 ? grid_max
                       : *std::max_element(costs.begin(), costs.end()) * 100.0;
    const std::vector<double> grid = make_log_grid(lo, hi, grid_points);

    const std::size_t idx = static_cast<std::size_t>(machine);
    const DeviationReport best = best_deviation(cv, idx, grid);

    ordered_json result = result_shell("truthfulness", common);
    ordered_json& params = result["parameters"];
    params["costs"] = join_doubles(costs);
    params["machine"] = machine;
    params["true_cost"] = best.true_cost;
    params["truthful_expected_cost"] = best.truthful_expected_cost;
    params["best_declared"] = best.declared_cost;
    params["best_expected_cost"] = best.deviated_expected_cost;
    params["profitable"] = best.profitable;
    params["grid_min"] = lo;
    params["grid_max"] = hi;
    params["grid_points"] = grid_points;
    for (double declared : grid) {
      const DeviationReport r = deviation_cost(cv, idx, declared);
      ordered_json row;
      row["declared"] = declared;
      row["expected_cost"] = r.deviated_expected_cost;
      row["profitable"] = r.profitable;
      result["records"].push_back(std::move(row));
    }
    return render(common, result);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized single-task scheduling mechanism toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  // Options a subcommand does not recognize bubble up here, so --config can
  // appear before or after the subcommand name. Keys in the file live in a
  // [subcommand] section; explicit command-line flags always win.
  app.fallthrough();
  app.set_config("--config", "",
                 "Key=value option file with a [subcommand] section");

  std::string output;

  AllocateCmd allocate_cmd;
  CLI::App* alloc = app.add_subcommand(
      "allocate", "Allocation probabilities for one declared cost vector");
  alloc->add_option("--costs", allocate_cmd.costs,
                    "Comma-separated machine costs")
      ->required()
      ->delimiter(',');
  add_common(alloc, allocate_cmd.common);
  alloc->callback([&] { output = allocate_cmd.run(); });

  SimulateCmd simulate_cmd;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo estimate of the average approximation ratio");
  sim->add_option("--family", simulate_cmd.family,
                  "Cost distribution: pareto, exponential, loglogistic")
      ->required()
      ->check(CLI::IsMember({"pareto", "exponential", "loglogistic"}));
  sim->add_option("--shape", simulate_cmd.shape,
                  "Shape parameter (alpha, lambda, or beta)")
      ->required();
  sim->add_option("--tmin", simulate_cmd.t_min, "Support minimum")
      ->capture_default_str();
  sim->add_option("--convention", simulate_cmd.convention,
                  "Distribution-function convention at the support minimum")
      ->check(CLI::IsMember({"literal", "renormalized"}))
      ->capture_default_str();
  sim->add_option("--n", simulate_cmd.n, "Machines per instance")
      ->required()
      ->check(CLI::Range(2, kMaxMachines));
  CLI::Option* trials_opt =
      sim->add_option("--trials", simulate_cmd.trials,
                      "Instances to draw (default 100000 for n <= 64, else 10000)")
          ->check(CLI::PositiveNumber);
  sim->add_option("--workers", simulate_cmd.workers, "Worker threads")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
  sim->add_option("--max-cost-draws", simulate_cmd.max_cost_draws,
                  "Refuse runs drawing more costs than this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sim, simulate_cmd.common);
  sim->callback([&] {
    simulate_cmd.trials_given = trials_opt->count() > 0;
    output = simulate_cmd.run();
  });

  BoundsCmd bounds_cmd;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Theoretical quantities for a distribution and sizes");
  bounds->add_option("--family", bounds_cmd.family,
                     "Cost distribution: pareto, exponential, loglogistic")
      ->required()
      ->check(CLI::IsMember({"pareto", "exponential", "loglogistic"}));
  bounds->add_option("--shape", bounds_cmd.shape,
                     "Shape parameter (alpha, lambda, or beta)")
      ->required();
  bounds->add_option("--tmin", bounds_cmd.t_min, "Support minimum")
      ->capture_default_str();
  bounds->add_option("--convention", bounds_cmd.convention,
                     "Distribution-function convention at the support minimum")
      ->check(CLI::IsMember({"literal", "renormalized"}))
      ->capture_default_str();
  bounds->add_option("--n", bounds_cmd.sizes, "Instance sizes (comma-separated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(2, 1024));
  add_common(bounds, bounds_cmd.common);
  bounds->callback([&] { output = bounds_cmd.run(); });

  SweepCmd sweep_cmd;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Ratio curves across instance sizes or worst-case epsilons");
  sweep->add_option("--kind", sweep_cmd.kind, "Sweep axis")
      ->required()
      ->check(CLI::IsMember({"n", "epsilon"}));
  sweep->add_option("--family", sweep_cmd.family,
                    "Cost distribution (kind n)")
      ->check(CLI::IsMember({"pareto", "exponential", "loglogistic"}));
  sweep->add_option("--shape", sweep_cmd.shape, "Shape parameter (kind n)")
      ->capture_default_str();
  sweep->add_option("--tmin", sweep_cmd.t_min, "Support minimum (kind n)")
      ->capture_default_str();
  sweep->add_option("--convention", sweep_cmd.convention,
                    "Distribution-function convention (kind n)")
      ->check(CLI::IsMember({"literal", "renormalized"}))
      ->capture_default_str();
  sweep->add_option("--n-list", sweep_cmd.sizes,
                    "Instance sizes to sweep (kind n)")
      ->delimiter(',')
      ->check(CLI::Range(2, kMaxMachines));
  sweep->add_option("--trials", sweep_cmd.trials, "Instances per size (kind n)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--workers", sweep_cmd.workers, "Worker threads (kind n)")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
  sweep->add_option("--n", sweep_cmd.n, "Instance size (kind epsilon)")
      ->check(CLI::Range(2, kMaxMachines))
      ->capture_default_str();
  sweep->add_option("--epsilons", sweep_cmd.epsilons,
                    "Cheapest-cost values to probe (kind epsilon)")
      ->delimiter(',');
  add_common(sweep, sweep_cmd.common);
  sweep->callback([&] { output = sweep_cmd.run(); });

  TruthfulnessCmd truth_cmd;
  CLI::App* truth = app.add_subcommand(
      "truthfulness", "Expected-cost scan over one machine's declarations");
  truth->add_option("--costs", truth_cmd.costs, "Comma-separated machine costs")
      ->required()
      ->delimiter(',');
  truth->add_option("--machine", truth_cmd.machine, "Deviating machine index")
      ->capture_default_str();
  truth->add_option("--grid-points", truth_cmd.grid_points,
                    "Number of declaration grid points")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  truth->add_option("--grid-min", truth_cmd.grid_min,
                    "Lowest declaration (default cheapest cost / 100)")
      ->check(CLI::PositiveNumber);
  truth->add_option("--grid-max", truth_cmd.grid_max,
                    "Highest declaration (default most expensive cost * 100)")
      ->check(CLI::PositiveNumber);
  add_common(truth, truth_cmd.common);
  truth->callback([&] { output = truth_cmd.run(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::cout << output;
  return 0;
}

#pragma once

#include <optional>
#include <random>
#include <string_view>

namespace schedmech {

// Cost distributions supported by the sampler. All are heavy-tailed or
// exponential families on [t_min, infinity) with a single shape parameter.
enum class Family { Pareto, Exponential, LogLogistic };

// How the distribution function treats the support minimum.
//
//   Literal       the textbook-form curve, cut off below t_min. For the
//                 exponential and log-logistic families this leaves a point
//                 mass-free gap: F(t_min) > 0, so the function does not
//                 start at zero.
//   Renormalized  the same curve conditioned on t >= t_min, rescaled so
//                 F(t_min) = 0 and F -> 1. This is a proper distribution
//                 on the support and is what the sampler always draws from.
enum class Convention { Literal, Renormalized };

struct DistributionSpec {
  Family family = Family::Pareto;
  double t_min = 1.0;  // support minimum, > 0
  double shape = 1.0;  // alpha (Pareto), lambda (Exponential), beta (LogLogistic), > 0
  Convention convention = Convention::Literal;
};

// Throws std::invalid_argument if t_min or shape is non-positive or not
// finite.
void validate(const DistributionSpec& spec);

// Quantile level used to pick the cost threshold below which the bulk of
// draws concentrate: the threshold h satisfies F(h * t_min) >= 11/12.
inline constexpr double kThresholdQuantile = 11.0 / 12.0;

// Threshold multiple h (relative to t_min) and the bound it certifies.
struct ThresholdChoice {
  double h;                 // >= 1; F(h * t_min) >= quantile
  double cdf_at_threshold;  // actual mass at or below h * t_min
  double ratio_bound;       // 2h + 1.33, see average_ratio_bound()
};

// Distribution function under the requested convention. Zero below t_min for
// Pareto/Exponential and for every renormalized family; the literal
// log-logistic curve is defined on all t > 0.
double cdf(const DistributionSpec& spec, double t);

// Inverse of the renormalized distribution function, u in [0, 1).
// Always uses the renormalized law regardless of spec.convention, since
// only that convention is a proper distribution on [t_min, infinity).
double quantile(const DistributionSpec& spec, double u);

// Draws one cost, always from the renormalized law on [t_min, infinity).
double sample(const DistributionSpec& spec, std::mt19937_64& rng);

// Smallest threshold multiple h >= 1 with cdf(h * t_min) >= quantile.
// Literal specs use closed forms (clamped up to 1 when the curve crosses
// the quantile before t_min); renormalized specs are solved by bisection.
ThresholdChoice solve_threshold(const DistributionSpec& spec,
                                double quantile = kThresholdQuantile);

// Bisection solver for the same threshold, convention-agnostic. Used as a
// cross-check of the closed forms and as the renormalized path.
double solve_threshold_bisect(const DistributionSpec& spec,
                              double quantile = kThresholdQuantile);

// Lower-case names for serialization: "pareto", "exponential", "loglogistic".
std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

}  // namespace schedmech

#include "schedmech/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "schedmech/bounds.hpp"
#include "schedmech/errors.hpp"
#include "schedmech/rng.hpp"

namespace schedmech {
namespace {

// ln(1 + e^s) without overflowing e^s.
double log1p_exp(double s) {
  return s > 36.0 ? s : std::log1p(std::exp(s));
}

[[noreturn]] void unknown_family() {
  throw std::invalid_argument("DistributionSpec: unknown family");
}

}  // namespace

void validate(const DistributionSpec& spec) {
  if (!(std::isfinite(spec.t_min) && spec.t_min > 0.0)) {
    throw std::invalid_argument(
        "DistributionSpec: t_min must be finite and strictly positive");
  }
  if (!(std::isfinite(spec.shape) && spec.shape > 0.0)) {
    throw std::invalid_argument(
        "DistributionSpec: shape must be finite and strictly positive");
  }
}

double cdf(const DistributionSpec& spec, double t) {
  validate(spec);
  if (std::isnan(t)) {
    throw std::invalid_argument("cdf: t must not be NaN");
  }
  const double tm = spec.t_min;
  const double shape = spec.shape;
  double value = 0.0;
  switch (spec.family) {
    case Family::Pareto:
      // Already zero at t_min, so both conventions coincide.
      value = t < tm ? 0.0 : -std::expm1(shape * std::log(tm / t));
      break;
    case Family::Exponential:
      if (spec.convention == Convention::Literal) {
        value = t < tm ? 0.0 : -std::expm1(-shape * t);
      } else {
        value = t < tm ? 0.0 : -std::expm1(-shape * (t - tm));
      }
      break;
    case Family::LogLogistic: {
      if (spec.convention == Convention::Literal) {
        // t^b / (1 + t^b) for all t > 0, evaluated as a logistic in log t
        // so neither huge nor tiny t overflows.
        value = t <= 0.0 ? 0.0 : 1.0 / (1.0 + std::exp(-shape * std::log(t)));
      } else {
        if (t < tm) return 0.0;
        const double tb = std::exp(shape * std::log(t));
        if (!std::isfinite(tb)) return 1.0;
        const double mb = std::exp(shape * std::log(tm));
        // Conditioning on t >= t_min reduces to (t^b - tm^b) / (1 + t^b).
        value = (tb - mb) / (1.0 + tb);
      }
      break;
    }
    default:
      unknown_family();
  }
  return std::clamp(value, 0.0, 1.0);
}

double quantile(const DistributionSpec& spec, double u) {
  validate(spec);
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("quantile: u must lie in [0, 1)");
  }
  const double tm = spec.t_min;
  const double shape = spec.shape;
  switch (spec.family) {
    case Family::Pareto:
      return tm * std::exp(-std::log1p(-u) / shape);
    case Family::Exponential:
      return tm - std::log1p(-u) / shape;
    case Family::LogLogistic: {
      // Under the conditioned law, 1 - v = (1 - u) / (1 + tm^b) picks the
      // matching point v of the unconditioned curve; invert that in log
      // space so extreme shapes cannot overflow intermediates.
      const double log_omv = std::log1p(-u) - log1p_exp(shape * std::log(tm));
      const double omv = std::exp(log_omv);
      return std::exp((std::log1p(-omv) - log_omv) / shape);
    }
    default:
      unknown_family();
  }
}

double sample(const DistributionSpec& spec, std::mt19937_64& rng) {
  // Capped so downstream cost arithmetic stays finite; with 53-bit uniforms
  // only shapes below about 0.07 can ever reach the cap.
  return std::min(quantile(spec, uniform01(rng)), 1e300);
}

double solve_threshold_bisect(const DistributionSpec& spec, double quantile) {
  validate(spec);
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw std::invalid_argument(
        "solve_threshold_bisect: quantile must lie in (0, 1)");
  }
  const double tm = spec.t_min;
  double lo = 1.0;
  if (cdf(spec, lo * tm) >= quantile) return 1.0;
  double hi = 2.0;
  int doublings = 0;
  while (cdf(spec, hi * tm) < quantile) {
    hi *= 2.0;
    if (++doublings > 2000) {
      throw internal_error("solve_threshold_bisect: failed to bracket");
    }
  }
  // Invariant: cdf(lo * tm) < quantile <= cdf(hi * tm).
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(spec, mid * tm) >= quantile) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ThresholdChoice solve_threshold(const DistributionSpec& spec, double quantile) {
  validate(spec);
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw std::invalid_argument("solve_threshold: quantile must lie in (0, 1)");
  }
  double h = 0.0;
  if (spec.convention == Convention::Renormalized) {
    h = solve_threshold_bisect(spec, quantile);
  } else {
    switch (spec.family) {
      case Family::Pareto:
        h = std::exp(-std::log1p(-quantile) / spec.shape);
        break;
      case Family::Exponential:
        h = -std::log1p(-quantile) / (spec.shape * spec.t_min);
        break;
      case Family::LogLogistic:
        h = std::exp((std::log(quantile) - std::log1p(-quantile)) / spec.shape) /
            spec.t_min;
        break;
      default:
        unknown_family();
    }
    // The curve can cross the quantile before the support minimum; costs
    // below t_min never occur, so the support floor is the threshold then.
    if (h < 1.0) h = 1.0;
  }
  ThresholdChoice choice;
  choice.h = h;
  choice.cdf_at_threshold = cdf(spec, h * spec.t_min);
  choice.ratio_bound = average_ratio_bound(h);
  if (choice.cdf_at_threshold < quantile - 1e-9) {
    throw internal_error("solve_threshold: threshold misses the quantile");
  }
  return choice;
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Pareto: return "pareto";
    case Family::Exponential: return "exponential";
    case Family::LogLogistic: return "loglogistic";
  }
  unknown_family();
}

std::optional<Family> parse_family(std::string_view name) {
  if (name == "pareto") return Family::Pareto;
  if (name == "exponential") return Family::Exponential;
  if (name == "loglogistic") return Family::LogLogistic;
  return std::nullopt;
}

}  // namespace schedmech

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "schedmech/rng.hpp"
#include "schedmech/streaming_stats.hpp"

using namespace schedmech;

TEST_CASE("known small streams") {
  RunningStats s;
  CHECK(s.count() == 0);
  CHECK(s.mean() == 0.0);
  CHECK(s.variance() == 0.0);
  CHECK(s.std_error() == 0.0);

  s.push(4.0);
  CHECK(s.count() == 1);
  CHECK(s.mean() == 4.0);
  CHECK(s.variance() == 0.0);
  CHECK(s.std_error() == 0.0);
  CHECK(s.min() == 4.0);
  CHECK(s.max() == 4.0);

  s.push(8.0);
  CHECK(s.count() == 2);
  CHECK(s.mean() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(s.variance() == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(s.std_error() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.min() == 4.0);
  CHECK(s.max() == 8.0);
}

TEST_CASE("matches the direct two-pass formulas") {
  std::mt19937_64 rng(12);
  std::vector<double> xs(4321);
  for (double& x : xs) x = 10.0 + 3.0 * uniform01(rng);

  RunningStats s;
  for (double x : xs) s.push(x);

  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double m2 = 0.0;
  for (double x : xs) m2 += (x - mean) * (x - mean);
  const double var = m2 / static_cast<double>(xs.size() - 1);

  CHECK(s.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(s.variance() == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("merging partial streams equals one pass") {
  std::mt19937_64 rng(34);
  std::vector<double> xs(1000);
  for (double& x : xs) x = std::exp(3.0 * uniform01(rng));

  RunningStats whole;
  for (double x : xs) whole.push(x);

  for (std::size_t cut1 : {std::size_t{0}, std::size_t{1}, std::size_t{437}, std::size_t{999}}) {
    for (std::size_t cut2 : {cut1, std::size_t{500}, std::size_t{1000}}) {
      if (cut2 < cut1) continue;
      RunningStats a, b, c;
      for (std::size_t i = 0; i < cut1; ++i) a.push(xs[i]);
      for (std::size_t i = cut1; i < cut2; ++i) b.push(xs[i]);
      for (std::size_t i = cut2; i < xs.size(); ++i) c.push(xs[i]);
      RunningStats merged;
      merged.merge(a);
      merged.merge(b);
      merged.merge(c);
      CHECK(merged.count() == whole.count());
      CHECK(merged.mean() == doctest::Approx(whole.mean()).epsilon(1e-12));
      CHECK(merged.variance() == doctest::Approx(whole.variance()).epsilon(1e-10));
      CHECK(merged.min() == whole.min());
      CHECK(merged.max() == whole.max());
    }
  }
}

TEST_CASE("merging an empty accumulator is a no-op") {
  RunningStats s;
  s.push(1.0);
  s.push(2.0);
  const double mean = s.mean();
  s.merge(RunningStats{});
  CHECK(s.count() == 2);
  CHECK(s.mean() == mean);

  RunningStats empty;
  empty.merge(s);
  CHECK(empty.count() == 2);
  CHECK(empty.mean() == mean);
}

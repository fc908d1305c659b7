#pragma once

#include <cmath>
#include <cstdint>

namespace schedmech {

// Streaming mean/variance via Welford's update, mergeable across partial
// streams with the Chan parallel formula. Numerically stable for long runs.
class RunningStats {
 public:
  void push(double x) {
    count_ += 1;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    if (x > max_) max_ = x;
    if (x < min_) min_ = x;
  }

  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    count_ += other.count_;
    if (other.max_ > max_) max_ = other.max_;
    if (other.min_ < min_) min_ = other.min_;
  }

  std::int64_t count() const { return count_; }
  double mean() const { return count_ > 0 ? mean_ : 0.0; }

  // Unbiased sample variance; zero until two values have been seen.
  double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }

  // Standard error of the mean; zero until two values have been seen.
  double std_error() const {
    return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

  double max() const { return count_ > 0 ? max_ : 0.0; }
  double min() const { return count_ > 0 ? min_ : 0.0; }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double max_ = -INFINITY;
  double min_ = INFINITY;
};

}  // namespace schedmech

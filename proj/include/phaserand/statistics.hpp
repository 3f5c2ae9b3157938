#pragma once

#include <cmath>
#include <cstdint>

namespace phaserand {

// Monte Carlo estimate; reproducible given (seed, n_samples).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// (sum, sum of squares, count) accumulator. Partial accumulators merge
// associatively, so a partitioned sample loop reduces to the same estimate
// as a serial one when partials are combined in a fixed order.
class RunningStat {
 public:
  void add(double x) {
    sum_ += x;
    sum_sq_ += x * x;
    ++n_;
  }

  void merge(const RunningStat& other) {
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
    n_ += other.n_;
  }

  std::uint64_t count() const { return n_; }
  double sum() const { return sum_; }

  double mean() const { return n_ == 0 ? 0.0 : sum_ / static_cast<double>(n_); }

  // Unbiased sample variance.
  double variance() const {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double v = (sum_sq_ - sum_ * sum_ / n) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }

  double std_dev() const { return std::sqrt(variance()); }

  double std_error() const {
    return n_ == 0 ? 0.0 : std_dev() / std::sqrt(static_cast<double>(n_));
  }

  McEstimate estimate(std::uint64_t seed) const {
    return {mean(), std_error(), n_, seed};
  }

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::uint64_t n_ = 0;
};

}  // namespace phaserand

#include "hetnet/montecarlo.hpp"

#include <cmath>

namespace hetnet {

MonteCarloEstimate MonteCarloEstimate::from_tally(std::int64_t successes, std::int64_t trials,
                                                  std::uint64_t seed) {
  MonteCarloEstimate e;
  e.trials = trials;
  e.seed = seed;
  if (trials <= 0) {
    e.defined = false;
    return e;
  }
  const double n = static_cast<double>(trials);
  e.value = static_cast<double>(successes) / n;
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / n);
  e.ci95_low = std::max(0.0, e.value - kZ95 * e.std_error);
  e.ci95_high = std::min(1.0, e.value + kZ95 * e.std_error);
  return e;
}

MonteCarloEstimate MonteCarloEstimate::from_moments(double sum, double sum_sq, std::int64_t trials,
                                                    std::uint64_t seed) {
  MonteCarloEstimate e;
  e.trials = trials;
  e.seed = seed;
  if (trials <= 0) {
    e.defined = false;
    return e;
  }
  const double n = static_cast<double>(trials);
  e.value = sum / n;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - sum * e.value) / (n - 1.0)) : 0.0;
  e.std_error = std::sqrt(var / n);
  e.ci95_low = e.value - kZ95 * e.std_error;
  e.ci95_high = e.value + kZ95 * e.std_error;
  return e;
}

MonteCarloEstimate conditional_estimate(std::int64_t successes, std::int64_t class_trials,
                                        std::uint64_t seed) {
  auto e = MonteCarloEstimate::from_tally(successes, class_trials, seed);
  e.low_confidence = class_trials < kLowConfidenceTrials;
  return e;
}

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace hetnet

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace hetnet {

/// A probability (or mean) estimate with its sampling error.
struct MonteCarloEstimate {
  double value = 0.0;
  std::int64_t trials = 0;
  double std_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::uint64_t seed = 0;
  // False when the conditioning class received no trials; value is then 0.
  bool defined = true;
  // Conditioning class received fewer than kLowConfidenceTrials trials.
  bool low_confidence = false;

  /// Bernoulli estimate successes / trials with the Wald interval (clamped).
  static MonteCarloEstimate from_tally(std::int64_t successes, std::int64_t trials,
                                       std::uint64_t seed);
  /// Sample-mean estimate from the first two moments.
  static MonteCarloEstimate from_moments(double sum, double sum_sq, std::int64_t trials,
                                         std::uint64_t seed);

  bool overlaps(const MonteCarloEstimate& other) const {
    return ci95_low <= other.ci95_high && other.ci95_low <= ci95_high;
  }
};

inline constexpr std::int64_t kLowConfidenceTrials = 30;
inline constexpr double kZ95 = 1.959963984540054;

/// Conditional estimate for a class with `class_trials` members.
MonteCarloEstimate conditional_estimate(std::int64_t successes, std::int64_t class_trials,
                                        std::uint64_t seed);

// Trials are grouped into fixed-size blocks independent of the worker count;
// each block accumulates into its own partial result and partials are merged
// in block order, so the outcome does not depend on scheduling.
inline constexpr std::int64_t kTrialBlock = 1024;

int default_workers();

/// Runs per_trial(trial, acc) for trial in [0, trials) over `workers` threads.
/// Acc must be default constructible and provide merge(const Acc&).
template <class Acc, class PerTrial>
Acc run_trials(std::int64_t trials, int workers, PerTrial per_trial) {
  const std::int64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<Acc> partial(static_cast<std::size_t>(std::max<std::int64_t>(blocks, 0)));
  auto run_block = [&](std::int64_t b) {
    Acc& acc = partial[static_cast<std::size_t>(b)];
    const std::int64_t end = std::min(trials, (b + 1) * kTrialBlock);
    for (std::int64_t t = b * kTrialBlock; t < end; ++t) per_trial(t, acc);
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::int64_t>(blocks, 1))));
  if (workers == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  Acc total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace hetnet

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/montecarlo.hpp"

namespace hetnet {

struct SinrSample {
  double signal_watts = 0.0;
  double interference_watts = 0.0;
  double noise_watts = 0.0;
  double sinr = 0.0;
};

/// Which stations interfere with an MBS-served user. Small-cell users always
/// see only their own layer outside the serving cluster.
enum class MbsInterference {
  kCoTier,     // every other MBS in the window
  kNoiseOnly,  // none; noise-limited
};

/// SINR of a served user. Cluster members add coherently with independent
/// CN(0,1) coefficients; interferers add as powers with unit-mean exponential
/// gains. Bias never enters: transmit powers are the true ones.
SinrSample compute_sinr(const Deployment& deployment, const ServingSet& serving,
                        const SystemParams& params, RandomStream& rng,
                        MbsInterference mbs_interference = MbsInterference::kCoTier);

/// Same computation on distances: `members` are the serving stations and
/// `interferers` the co-channel ones. Fading is drawn members first, then
/// interferers in the given order.
SinrSample sinr_from_distances(double power_watts, std::span<const double> members,
                               std::span<const double> interferers, double noise_watts,
                               double alpha, RandomStream& rng);

struct CoverageTally {
  std::int64_t covered_mbs = 0;
  std::int64_t covered_mbs_noise_only = 0;
  std::vector<std::int64_t> covered_layers;

  std::int64_t covered_sbs() const;
  std::int64_t covered_total() const { return covered_mbs + covered_sbs(); }
};

struct CoverageResult {
  double theta = 0.0;
  MonteCarloEstimate total;
  MonteCarloEstimate mbs_conditional;
  MonteCarloEstimate sbs_conditional;
  std::vector<MonteCarloEstimate> per_layer_conditional;

  // Noise-limited MBS variant on the same trials.
  MonteCarloEstimate mbs_conditional_noise_only;
  MonteCarloEstimate total_noise_only_mbs;

  // Raw tallies: the association classes are shared by every theta.
  std::int64_t trials = 0;
  std::int64_t mbs_trials = 0;
  std::vector<std::int64_t> layer_trials;
  CoverageTally covered;
};

/// One set of trials evaluated at every threshold in `thetas`, so results for
/// different thresholds are computed on identical SINR samples.
std::vector<CoverageResult> estimate_coverage(const SystemParams& params,
                                              std::span<const double> thetas,
                                              std::int64_t trials, std::uint64_t seed,
                                              int workers = default_workers());

CoverageResult estimate_coverage(const SystemParams& params, double theta, std::int64_t trials,
                                 std::uint64_t seed, int workers = default_workers());

}  // namespace hetnet

#include "hetnet/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hetnet {

SinrSample sinr_from_distances(double power_watts, std::span<const double> members,
                               std::span<const double> interferers, double noise_watts,
                               double alpha, RandomStream& rng) {
  std::complex<double> amplitude{0.0, 0.0};
  for (double r : members) amplitude += draw_channel(rng) * std::sqrt(path_gain(r, alpha));
  double interference = 0.0;
  for (double r : interferers) interference += draw_fading(rng).gain * path_gain(r, alpha);

  SinrSample s;
  s.signal_watts = power_watts * std::norm(amplitude);
  s.interference_watts = power_watts * interference;
  s.noise_watts = noise_watts;
  const double denom = s.interference_watts + s.noise_watts;
  s.sinr = denom > 0.0 ? s.signal_watts / denom : std::numeric_limits<double>::infinity();
  return s;
}

namespace {

std::vector<double> distances_of(const std::vector<Point2D>& points) {
  std::vector<double> d;
  d.reserve(points.size());
  for (const auto& p : points) d.push_back(p.norm());
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

SinrSample compute_sinr(const Deployment& deployment, const ServingSet& serving,
                        const SystemParams& params, RandomStream& rng,
                        MbsInterference mbs_interference) {
  const auto& members = serving.member_distances.values;
  std::vector<double> all;
  double power = params.mbs_power_watts;
  if (serving.is_mbs()) {
    if (mbs_interference == MbsInterference::kCoTier) all = distances_of(deployment.mbs_points);
  } else {
    const int layer = *serving.layer_index;
    power = params.layer(layer).tx_power_watts;
    all = distances_of(deployment.sbs_points[static_cast<std::size_t>(layer - 1)]);
  }
  // The serving stations are the nearest ones of their tier.
  std::span<const double> interferers;
  if (all.size() > members.size()) interferers = std::span<const double>(all).subspan(members.size());
  return sinr_from_distances(power, members, interferers, params.noise_power_watts,
                             params.path_loss_exponent, rng);
}

std::int64_t CoverageTally::covered_sbs() const {
  return std::accumulate(covered_layers.begin(), covered_layers.end(), std::int64_t{0});
}

namespace {

struct CoverageAccumulator {
  std::int64_t trials = 0;
  std::int64_t mbs_trials = 0;
  std::vector<std::int64_t> layer_trials;
  std::vector<CoverageTally> per_theta;

  void init(std::size_t layers, std::size_t thetas) {
    layer_trials.assign(layers, 0);
    per_theta.assign(thetas, CoverageTally{0, 0, std::vector<std::int64_t>(layers, 0)});
  }

  void merge(const CoverageAccumulator& o) {
    if (o.per_theta.empty()) return;
    if (per_theta.empty()) init(o.layer_trials.size(), o.per_theta.size());
    trials += o.trials;
    mbs_trials += o.mbs_trials;
    for (std::size_t i = 0; i < layer_trials.size(); ++i) layer_trials[i] += o.layer_trials[i];
    for (std::size_t t = 0; t < per_theta.size(); ++t) {
      auto& a = per_theta[t];
      const auto& b = o.per_theta[t];
      a.covered_mbs += b.covered_mbs;
      a.covered_mbs_noise_only += b.covered_mbs_noise_only;
      for (std::size_t i = 0; i < a.covered_layers.size(); ++i) a.covered_layers[i] += b.covered_layers[i];
    }
  }
};

}  // namespace

std::vector<CoverageResult> estimate_coverage(const SystemParams& params,
                                              std::span<const double> thetas,
                                              std::int64_t trials, std::uint64_t seed,
                                              int workers) {
  require_valid(params);
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  for (double theta : thetas) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  }
  const auto layer_count = params.layers.size();
  const double alpha = params.path_loss_exponent;
  const double noise = params.noise_power_watts;

  auto acc = run_trials<CoverageAccumulator>(trials, workers, [&](std::int64_t t,
                                                                  CoverageAccumulator& a) {
    if (a.per_theta.empty()) a.init(layer_count, thetas.size());
    TrialGeometry geometry(params, seed, t);
    const auto serving = geometry.associate();
    auto fading = derive_stream(seed, static_cast<std::uint64_t>(t), StreamKind::kFading);
    const auto& members = serving.member_distances.values;
    ++a.trials;

    if (serving.is_mbs()) {
      ++a.mbs_trials;
      const auto& all = geometry.all_mbs_distances();
      const auto interferers = std::span<const double>(all).subspan(members.size());
      const auto s = sinr_from_distances(params.mbs_power_watts, members, interferers, noise,
                                         alpha, fading);
      const double snr = noise > 0.0 ? s.signal_watts / noise
                                     : std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (s.sinr > thetas[i]) ++a.per_theta[i].covered_mbs;
        if (snr > thetas[i]) ++a.per_theta[i].covered_mbs_noise_only;
      }
    } else {
      const int layer = *serving.layer_index;
      const auto idx = static_cast<std::size_t>(layer - 1);
      ++a.layer_trials[idx];
      const auto& all = geometry.all_layer_distances(layer);
      const auto interferers = std::span<const double>(all).subspan(members.size());
      const auto s = sinr_from_distances(params.layer(layer).tx_power_watts, members, interferers,
                                         noise, alpha, fading);
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (s.sinr > thetas[i]) ++a.per_theta[i].covered_layers[idx];
      }
    }
  });
  if (acc.per_theta.empty()) acc.init(layer_count, thetas.size());

  std::vector<CoverageResult> results;
  results.reserve(thetas.size());
  const std::int64_t sbs_trials = acc.trials - acc.mbs_trials;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto& c = acc.per_theta[i];
    CoverageResult r;
    r.theta = thetas[i];
    r.trials = acc.trials;
    r.mbs_trials = acc.mbs_trials;
    r.layer_trials = acc.layer_trials;
    r.covered = c;
    r.total = MonteCarloEstimate::from_tally(c.covered_total(), acc.trials, seed);
    r.mbs_conditional = conditional_estimate(c.covered_mbs, acc.mbs_trials, seed);
    r.sbs_conditional = conditional_estimate(c.covered_sbs(), sbs_trials, seed);
    for (std::size_t l = 0; l < layer_count; ++l) {
      r.per_layer_conditional.push_back(
          conditional_estimate(c.covered_layers[l], acc.layer_trials[l], seed));
    }
    r.mbs_conditional_noise_only = conditional_estimate(c.covered_mbs_noise_only, acc.mbs_trials, seed);
    r.total_noise_only_mbs = MonteCarloEstimate::from_tally(
        c.covered_mbs_noise_only + c.covered_sbs(), acc.trials, seed);
    results.push_back(std::move(r));
  }
  return results;
}

CoverageResult estimate_coverage(const SystemParams& params, double theta, std::int64_t trials,
                                 std::uint64_t seed, int workers) {
  const double thetas[] = {theta};
  return std::move(estimate_coverage(params, thetas, trials, seed, workers).front());
}

}  // namespace hetnet

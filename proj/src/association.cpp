#include "hetnet/association.hpp"

#include <stdexcept>

namespace hetnet {

ServingSet associate_distances(double mbs_distance,
                               const std::vector<std::span<const double>>& clusters,
                               const SystemParams& params) {
  const double alpha = params.path_loss_exponent;
  ServingSet best;
  best.kind = ServingKind::kMbs;
  best.member_distances.values = {mbs_distance};
  best.rss = rss_mbs(params.mbs_power_watts, mbs_distance, alpha);

  int winner = 0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].empty()) continue;
    const auto rss = rss_cluster(params.layers[i], clusters[i], alpha);
    if (rss > best.rss) {
      best.rss = rss;
      winner = static_cast<int>(i) + 1;
    }
  }
  if (winner > 0) {
    const auto& members = clusters[static_cast<std::size_t>(winner - 1)];
    best.kind = ServingKind::kSbsCluster;
    best.layer_index = winner;
    best.member_distances.values.assign(members.begin(), members.end());
  }
  return best;
}

ServingSet associate(const Deployment& deployment, const SystemParams& params) {
  const int k = params.cluster_size;
  const auto mbs = ordered_knn_distances(deployment.mbs_points, 1);
  std::vector<OrderedDistances> storage(deployment.sbs_points.size());
  std::vector<std::span<const double>> clusters(deployment.sbs_points.size());
  for (std::size_t i = 0; i < deployment.sbs_points.size(); ++i) {
    const auto& points = deployment.sbs_points[i];
    if (points.empty() && params.layers[i].density_per_m2 <= 0.0) continue;
    storage[i] = ordered_knn_distances(points, k);
    clusters[i] = storage[i].values;
  }
  return associate_distances(mbs.nearest(), clusters, params);
}

RandomStream deployment_stream(std::uint64_t seed, std::int64_t trial) {
  return derive_stream(seed, static_cast<std::uint64_t>(trial), StreamKind::kDeployment);
}

TrialGeometry::TrialGeometry(const SystemParams& params, std::uint64_t seed, std::int64_t trial)
    : params_(&params) {
  auto rng = deployment_stream(seed, trial);
  auto streams = TierStreams::split(rng, params.layer_count());
  const double radius = params.window_radius_m;
  mbs_ = std::make_unique<LazyTier>(params.mbs_density_per_m2, radius, std::move(streams.mbs), 1);
  layers_.reserve(params.layers.size());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    layers_.push_back(std::make_unique<LazyTier>(params.layers[i].density_per_m2, radius,
                                                 std::move(streams.layers[i]),
                                                 params.cluster_size));
  }
}

ServingSet TrialGeometry::associate() const {
  const auto k = static_cast<std::size_t>(params_->cluster_size);
  if (mbs_->empty()) throw InsufficientPoints(0, 1);
  std::vector<std::span<const double>> clusters(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& d = layers_[i]->distances();
    if (d.size() >= k) {
      clusters[i] = std::span<const double>(d.data(), k);
    } else if (!d.empty() || params_->layers[i].density_per_m2 > 0.0) {
      throw InsufficientPoints(d.size(), k);
    }
  }
  return associate_distances(mbs_->distances().front(), clusters, *params_);
}

namespace {

struct ConnectionTally {
  std::int64_t trials = 0;
  std::int64_t mbs = 0;
  std::vector<std::int64_t> layers;

  void merge(const ConnectionTally& o) {
    trials += o.trials;
    mbs += o.mbs;
    if (layers.size() < o.layers.size()) layers.resize(o.layers.size(), 0);
    for (std::size_t i = 0; i < o.layers.size(); ++i) layers[i] += o.layers[i];
  }
};

struct BernoulliTally {
  std::int64_t trials = 0;
  std::int64_t hits = 0;

  void merge(const BernoulliTally& o) {
    trials += o.trials;
    hits += o.hits;
  }
};

}  // namespace

ConnectionEstimates estimate_connection_probabilities(const SystemParams& params,
                                                      std::int64_t trials, std::uint64_t seed,
                                                      int workers) {
  require_valid(params);
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const auto layer_count = params.layers.size();

  auto tally = run_trials<ConnectionTally>(trials, workers, [&](std::int64_t t, ConnectionTally& acc) {
    if (acc.layers.empty()) acc.layers.assign(layer_count, 0);
    TrialGeometry geometry(params, seed, t);
    const auto serving = geometry.associate();
    ++acc.trials;
    if (serving.is_mbs()) {
      ++acc.mbs;
    } else {
      ++acc.layers[static_cast<std::size_t>(*serving.layer_index - 1)];
    }
  });
  tally.layers.resize(layer_count, 0);

  ConnectionEstimates out;
  out.trials = tally.trials;
  out.mbs_count = tally.mbs;
  out.layer_counts = tally.layers;
  out.p_mbs = MonteCarloEstimate::from_tally(tally.mbs, tally.trials, seed);
  out.p_sbs = MonteCarloEstimate::from_tally(tally.trials - tally.mbs, tally.trials, seed);
  for (auto count : tally.layers) {
    out.per_layer.push_back(MonteCarloEstimate::from_tally(count, tally.trials, seed));
  }
  return out;
}

MonteCarloEstimate estimate_pairwise_layer_win(const SystemParams& params, int layer,
                                               std::int64_t trials, std::uint64_t seed,
                                               int workers) {
  require_valid_model(params);
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const auto& lp = params.layer(layer);
  const double alpha = params.path_loss_exponent;

  auto tally = run_trials<BernoulliTally>(trials, workers, [&](std::int64_t t, BernoulliTally& acc) {
    auto rng = derive_stream(seed, static_cast<std::uint64_t>(t), StreamKind::kPairwise,
                             static_cast<std::uint64_t>(layer) << 32);
    ++acc.trials;
    if (lp.density_per_m2 <= 0.0) return;
    const auto cluster = sample_ordered_distances_direct(lp.density_per_m2, params.cluster_size, rng);
    const double r_m = sample_nearest_distance(params.mbs_density_per_m2, rng);
    if (rss_cluster(lp, cluster, alpha) > rss_mbs(params.mbs_power_watts, r_m, alpha)) ++acc.hits;
  });
  return MonteCarloEstimate::from_tally(tally.hits, tally.trials, seed);
}

}  // namespace hetnet

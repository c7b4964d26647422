#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hetnet/geometry.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/params.hpp"
#include "hetnet/propagation.hpp"

namespace hetnet {

enum class ServingKind { kMbs, kSbsCluster };

/// Association outcome: the nearest MBS, or the k-station cluster of one layer.
struct ServingSet {
  ServingKind kind = ServingKind::kMbs;
  std::optional<int> layer_index;
  OrderedDistances member_distances;
  RssValue rss;

  bool is_mbs() const { return kind == ServingKind::kMbs; }
  bool operator==(const ServingSet&) const = default;
};

/// Biased max-RSS rule. Equal RSS resolves to the MBS, then to the lower layer.
/// Layers with zero density and no stations never serve.
ServingSet associate(const Deployment& deployment, const SystemParams& params);

/// Same rule on distances only: the nearest MBS distance and, per layer, the
/// ascending cluster distances (empty for a layer that cannot form a cluster).
ServingSet associate_distances(double mbs_distance,
                               const std::vector<std::span<const double>>& clusters,
                               const SystemParams& params);

/// The deployment of one Monte Carlo trial, drawn lazily. Association needs
/// only the nearest stations of each tier; the remaining stations of a tier
/// are drawn on demand. Every distance equals the corresponding one from
/// sample_deployment on the same trial stream.
class TrialGeometry {
 public:
  TrialGeometry(const SystemParams& params, std::uint64_t seed, std::int64_t trial);

  ServingSet associate() const;

  /// All MBS distances in the window, ascending.
  const std::vector<double>& all_mbs_distances() { return mbs_->complete(); }
  /// All layer distances in the window, ascending (layer is 1-based).
  const std::vector<double>& all_layer_distances(int layer) {
    return layers_[static_cast<std::size_t>(layer - 1)]->complete();
  }

 private:
  const SystemParams* params_;
  std::unique_ptr<LazyTier> mbs_;
  std::vector<std::unique_ptr<LazyTier>> layers_;
};

/// Random stream for trial `trial` of a windowed Monte Carlo run.
RandomStream deployment_stream(std::uint64_t seed, std::int64_t trial);

struct ConnectionEstimates {
  MonteCarloEstimate p_mbs;
  MonteCarloEstimate p_sbs;
  std::vector<MonteCarloEstimate> per_layer;

  std::int64_t trials = 0;
  std::int64_t mbs_count = 0;
  std::vector<std::int64_t> layer_counts;
};

ConnectionEstimates estimate_connection_probabilities(const SystemParams& params,
                                                      std::int64_t trials, std::uint64_t seed,
                                                      int workers = default_workers());

/// Prob{RSS of layer's cluster > RSS of nearest MBS}, ignoring other layers.
MonteCarloEstimate estimate_pairwise_layer_win(const SystemParams& params, int layer,
                                               std::int64_t trials, std::uint64_t seed,
                                               int workers = default_workers());

}  // namespace hetnet

#include "hetnet/geometry.hpp"

#include <algorithm>
#include <numbers>

#include <fmt/format.h>

namespace hetnet {

InsufficientPoints::InsufficientPoints(std::size_t have, std::size_t need)
    : std::runtime_error(fmt::format("need {} points, have {}", need, have)) {}

RadialArrivals::RadialArrivals(double density, double radius, RandomStream& stream)
    : radius_(radius), stream_(&stream) {
  if (density > 0.0) {
    scale_ = 1.0 / (std::numbers::pi * density);
  } else {
    done_ = true;
  }
}

std::optional<double> RadialArrivals::next() {
  while (!done_) {
    arrival_ += stream_->unit_exponential();
    const double r = std::sqrt(arrival_ * scale_);
    if (r > radius_) {
      done_ = true;
      break;
    }
    if (r >= kOriginExclusionM) return r;
  }
  return std::nullopt;
}

std::vector<Point2D> sample_ppp(double density, double window_radius, RandomStream& rng) {
  RandomStream angles(rng.engine()());
  std::vector<Point2D> points;
  RadialArrivals arrivals(density, window_radius, rng);
  while (auto r = arrivals.next()) {
    const double phi = 2.0 * std::numbers::pi * angles.uniform();
    points.push_back({*r * std::cos(phi), *r * std::sin(phi)});
  }
  return points;
}

TierStreams TierStreams::split(RandomStream& rng, int layer_count) {
  TierStreams s{RandomStream(rng.engine()()), {}};
  s.layers.reserve(static_cast<std::size_t>(layer_count));
  for (int i = 0; i < layer_count; ++i) s.layers.emplace_back(rng.engine()());
  return s;
}

namespace {

// Redraws a positive-density tier until it holds `min_points`. The loop
// terminates with probability one; valid windows make a redraw very rare.
std::vector<Point2D> sample_tier(double density, double radius, RandomStream& stream,
                                 int min_points) {
  for (;;) {
    auto points = sample_ppp(density, radius, stream);
    if (density <= 0.0 || points.size() >= static_cast<std::size_t>(min_points)) return points;
  }
}

}  // namespace

Deployment sample_deployment(const SystemParams& params, RandomStream& rng) {
  auto streams = TierStreams::split(rng, params.layer_count());
  Deployment d;
  d.window_radius_m = params.window_radius_m;
  d.mbs_points = sample_tier(params.mbs_density_per_m2, d.window_radius_m, streams.mbs, 1);
  d.sbs_points.reserve(params.layers.size());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    d.sbs_points.push_back(sample_tier(params.layers[i].density_per_m2, d.window_radius_m,
                                       streams.layers[i], params.cluster_size));
  }
  return d;
}

OrderedDistances ordered_knn_distances(std::span<const Point2D> points, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto need = static_cast<std::size_t>(k);
  if (points.size() < need) throw InsufficientPoints(points.size(), need);
  std::vector<double> d;
  d.reserve(points.size());
  for (const auto& p : points) d.push_back(p.norm());
  std::partial_sort(d.begin(), d.begin() + k, d.end());
  d.resize(need);
  return {std::move(d)};
}

OrderedDistances sample_ordered_distances_direct(double density, int k, RandomStream& rng) {
  if (!(density > 0.0) || k < 1) throw std::invalid_argument("need density > 0 and k >= 1");
  const double scale = 1.0 / (std::numbers::pi * density);
  OrderedDistances out;
  out.values.reserve(static_cast<std::size_t>(k));
  double arrival = 0.0;
  for (int j = 0; j < k; ++j) {
    arrival += rng.unit_exponential();
    out.values.push_back(std::sqrt(arrival * scale));
  }
  return out;
}

double sample_nearest_distance(double density, RandomStream& rng) {
  return std::sqrt(rng.unit_exponential() / (std::numbers::pi * density));
}

LazyTier::LazyTier(double density, double window_radius, RandomStream stream, int min_points)
    : density_(density), radius_(window_radius), stream_(std::move(stream)) {
  attempt(min_points);
}

void LazyTier::attempt(int min_points) {
  const auto need = static_cast<std::size_t>(std::max(min_points, 0));
  for (;;) {
    // Consume the angle-stream seed exactly as sample_ppp does.
    (void)stream_.engine()();
    arrivals_.emplace(density_, radius_, stream_);
    distances_.clear();
    complete_ = false;
    while (distances_.size() < need) {
      auto r = arrivals_->next();
      if (!r) {
        complete_ = true;
        break;
      }
      distances_.push_back(*r);
    }
    if (density_ <= 0.0 || distances_.size() >= need) return;
  }
}

const std::vector<double>& LazyTier::complete() {
  if (!complete_) {
    while (auto r = arrivals_->next()) distances_.push_back(*r);
    complete_ = true;
  }
  return distances_;
}

}  // namespace hetnet

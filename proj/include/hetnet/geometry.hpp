#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hetnet/params.hpp"
#include "hetnet/random.hpp"

namespace hetnet {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  bool operator==(const Point2D&) const = default;
};

/// Distances from the origin in ascending order.
struct OrderedDistances {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double nearest() const { return values.front(); }
  double farthest() const { return values.back(); }
  bool operator==(const OrderedDistances&) const = default;
};

/// One realisation around the typical user at the origin. Points in every
/// list are ordered by distance from the origin.
struct Deployment {
  std::vector<Point2D> mbs_points;
  std::vector<std::vector<Point2D>> sbs_points;
  double window_radius_m = 0.0;
};

class InsufficientPoints : public std::runtime_error {
 public:
  InsufficientPoints(std::size_t have, std::size_t need);
};

// Points closer than this to the user are dropped.
inline constexpr double kOriginExclusionM = 1e-6;

/// Distances of a homogeneous PPP on a disc, generated nearest first:
/// pi * density * r_j^2 are the arrival times of a unit-rate Poisson process.
class RadialArrivals {
 public:
  RadialArrivals(double density, double radius, RandomStream& stream);

  /// Next distance inside the window, or nullopt once the window is exhausted.
  std::optional<double> next();

 private:
  double scale_ = 0.0;  // 1 / (pi * density)
  double radius_ = 0.0;
  double arrival_ = 0.0;
  bool done_ = false;
  RandomStream* stream_;
};

/// Poisson(density * pi * R^2) points, uniform on the disc, sorted by radius.
/// The first draw of `rng` seeds the angle stream.
std::vector<Point2D> sample_ppp(double density, double window_radius, RandomStream& rng);

/// One independent draw per tier; tiers with positive density are redrawn
/// until they hold at least one (MBS) or k (SBS) points.
Deployment sample_deployment(const SystemParams& params, RandomStream& rng);

/// The k smallest origin distances, ascending.
OrderedDistances ordered_knn_distances(std::span<const Point2D> points, int k);

/// Exact k-nearest-neighbour distance law of an unbounded planar PPP.
OrderedDistances sample_ordered_distances_direct(double density, int k, RandomStream& rng);

/// Nearest-point distance of an unbounded planar PPP (k = 1 case).
double sample_nearest_distance(double density, RandomStream& rng);

/// Per-tier streams for one trial, split off a single trial stream. Shared by
/// sample_deployment and the lazy trial geometry so both see the same draws.
struct TierStreams {
  RandomStream mbs;
  std::vector<RandomStream> layers;

  static TierStreams split(RandomStream& rng, int layer_count);
};

/// A tier generated on demand. The nearest `min_points` distances are drawn
/// up front (with redraws, exactly as sample_deployment does); the rest of the
/// window only when asked for. The draw sequence matches sample_ppp.
class LazyTier {
 public:
  LazyTier(double density, double window_radius, RandomStream stream, int min_points);

  LazyTier(const LazyTier&) = delete;
  LazyTier& operator=(const LazyTier&) = delete;
  LazyTier(LazyTier&&) = delete;

  /// Distances drawn so far, ascending.
  const std::vector<double>& distances() const { return distances_; }
  bool empty() const { return distances_.empty(); }

  /// Draws the remaining points of the window.
  const std::vector<double>& complete();

 private:
  void attempt(int min_points);

  double density_;
  double radius_;
  RandomStream stream_;
  std::optional<RadialArrivals> arrivals_;
  std::vector<double> distances_;
  bool complete_ = false;
};

}  // namespace hetnet

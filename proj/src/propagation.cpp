#include "hetnet/propagation.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace hetnet {

double path_gain(double distance, double alpha) {
  if (!(distance > 0.0)) throw DomainError(fmt::format("distance must be positive, got {}", distance));
  if (alpha == 4.0) {
    const double d2 = distance * distance;
    return 1.0 / (d2 * d2);
  }
  return std::pow(distance, -alpha);
}

RssValue rss_mbs(double power_watts, double distance, double alpha) {
  return {power_watts * path_gain(distance, alpha)};
}

RssValue rss_cluster(const LayerParams& layer, std::span<const double> distances, double alpha) {
  if (distances.empty()) throw DomainError("cluster has no members");
  double sum = 0.0;
  for (double r : distances) sum += path_gain(r, alpha);
  return {layer.bias * layer.tx_power_watts * sum};
}

RssValue rss_cluster(const LayerParams& layer, const OrderedDistances& distances, double alpha) {
  return rss_cluster(layer, std::span<const double>(distances.values), alpha);
}

FadingDraw draw_fading(RandomStream& rng) { return {rng.unit_exponential()}; }

std::complex<double> draw_channel(RandomStream& rng) {
  const double re = rng.standard_normal();
  const double im = rng.standard_normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace hetnet

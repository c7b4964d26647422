#pragma once

#include <complex>
#include <span>
#include <stdexcept>

#include "hetnet/geometry.hpp"
#include "hetnet/params.hpp"
#include "hetnet/random.hpp"

namespace hetnet {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rayleigh power gain |h|^2, unit-mean exponential.
struct FadingDraw {
  double gain = 0.0;
};

/// Received power in watts.
struct RssValue {
  double watts = 0.0;

  auto operator<=>(const RssValue&) const = default;
};

/// distance^-alpha.
double path_gain(double distance, double alpha);

/// Long-term (fading-free, unbiased) received power from the nearest MBS.
RssValue rss_mbs(double power_watts, double distance, double alpha);

/// Biased cluster power beta * p * sum_j r_j^-alpha, used for association only.
RssValue rss_cluster(const LayerParams& layer, std::span<const double> distances, double alpha);
RssValue rss_cluster(const LayerParams& layer, const OrderedDistances& distances, double alpha);

FadingDraw draw_fading(RandomStream& rng);

/// Complex channel coefficient h ~ CN(0, 1); |h|^2 is a FadingDraw.
std::complex<double> draw_channel(RandomStream& rng);

}  // namespace hetnet

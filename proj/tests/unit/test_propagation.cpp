#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "gof.hpp"
#include "hetnet/propagation.hpp"

namespace hetnet {
namespace {

TEST(PathGain, Examples) {
  EXPECT_EQ(path_gain(1.0, 4.0), 1.0);
  EXPECT_EQ(path_gain(2.0, 4.0), 0.0625);
  EXPECT_THROW(path_gain(0.0, 4.0), DomainError);
  EXPECT_THROW(path_gain(-1.0, 3.0), DomainError);
  EXPECT_DOUBLE_EQ(path_gain(3.0, 3.5), std::pow(3.0, -3.5));
}

TEST(PathGain, ReciprocalSymmetry) {
  for (double alpha : {2.5, 3.0, 3.7, 4.0, 5.0}) {
    for (double d : {1e-3, 0.2, 1.0, 7.5, 480.0, 1e4}) {
      EXPECT_NEAR(path_gain(d, alpha) * path_gain(1.0 / d, alpha), 1.0, 1e-12);
    }
  }
}

TEST(RssMbs, Examples) {
  EXPECT_EQ(rss_mbs(1.0, 1.0, 4.0).watts, 1.0);
  EXPECT_EQ(rss_mbs(10.0, 2.0, 4.0).watts, 0.625);
  EXPECT_NEAR(rss_mbs(20.0, 500.0, 4.0).watts, 3.2e-10, 1e-24);
  EXPECT_THROW(rss_mbs(20.0, 0.0, 4.0), DomainError);
}

TEST(RssCluster, Examples) {
  const LayerParams layer{1, 1.0, 2.0, 1e-5};
  const std::vector<double> d{1.0, 1.0};
  EXPECT_EQ(rss_cluster(layer, d, 4.0).watts, 4.0);

  const LayerParams single{1, 0.3, 1.0, 1e-5};
  const std::vector<double> one{7.0};
  EXPECT_DOUBLE_EQ(rss_cluster(single, one, 4.0).watts, 0.3 * std::pow(7.0, -4.0));

  const std::vector<double> bad{1.0, 0.0};
  EXPECT_THROW(rss_cluster(layer, bad, 4.0), DomainError);
}

TEST(RssCluster, MatchesBruteForceSum) {
  auto rng = derive_stream(3, 0, StreamKind::kFading);
  for (int t = 0; t < 200; ++t) {
    const LayerParams layer{1, 0.01 + rng.uniform(), 1.0 + 9.0 * rng.uniform(), 1e-5};
    std::vector<double> d;
    for (int j = 0; j < 5; ++j) d.push_back(1.0 + 500.0 * rng.uniform());
    std::sort(d.begin(), d.end());
    double brute = 0.0;
    for (double r : d) brute += layer.bias * layer.tx_power_watts * std::pow(r, -3.6);
    EXPECT_NEAR(rss_cluster(layer, d, 3.6).watts, brute, 1e-14 * brute);
  }
}

TEST(RssCluster, MonotoneInBiasProximityAndMembers) {
  const std::vector<double> d{10.0, 20.0, 30.0};
  const LayerParams lo{1, 0.2, 2.0, 1e-5}, hi{1, 0.2, 4.0, 1e-5};
  EXPECT_LT(rss_cluster(lo, d, 4.0), rss_cluster(hi, d, 4.0));
  for (std::size_t j = 0; j < d.size(); ++j) {
    auto closer = d;
    closer[j] *= 0.9;
    EXPECT_LT(rss_cluster(lo, d, 4.0), rss_cluster(lo, closer, 4.0));
    std::vector<double> subset;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i != j) subset.push_back(d[i]);
    }
    EXPECT_LE(rss_cluster(lo, subset, 4.0), rss_cluster(lo, d, 4.0));
  }
}

TEST(Fading, MeanAndMedian) {
  auto rng = derive_stream(5, 0, StreamKind::kFading);
  std::vector<double> g(1'000'000);
  for (auto& x : g) {
    x = draw_fading(rng).gain;
    ASSERT_GE(x, 0.0);
  }
  double mean = 0.0;
  for (double x : g) mean += x;
  mean /= static_cast<double>(g.size());
  EXPECT_NEAR(mean, 1.0, 0.01);
  std::nth_element(g.begin(), g.begin() + g.size() / 2, g.end());
  EXPECT_NEAR(g[g.size() / 2], std::log(2.0), 0.01);
}

TEST(Fading, UnitExponentialKs) {
  auto rng = derive_stream(7, 0, StreamKind::kFading);
  std::vector<double> g(100'000);
  for (auto& x : g) x = draw_fading(rng).gain;
  const auto r = testing::ks_test(g, testing::unit_exponential_cdf);
  EXPECT_GT(r.p_value, 0.01) << r.statistic;
}

TEST(Fading, ComplexChannelPowerIsExponential) {
  auto rng = derive_stream(9, 0, StreamKind::kFading);
  std::vector<double> g(100'000);
  for (auto& x : g) x = std::norm(draw_channel(rng));
  const auto r = testing::ks_test(g, testing::unit_exponential_cdf);
  EXPECT_GT(r.p_value, 0.01) << r.statistic;
}

}  // namespace
}  // namespace hetnet

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "hetnet/coverage.hpp"

namespace hetnet {
namespace {

TEST(Sinr, RatioArithmetic) {
  auto rng = derive_stream(1, 0, StreamKind::kFading);
  auto probe = rng;
  const double r = 40.0;
  const double power = 0.5 / (std::norm(draw_channel(probe)) * path_gain(r, 4.0));
  const std::vector<double> members{r};
  const auto s = sinr_from_distances(power, members, {}, 0.1, 4.0, rng);
  EXPECT_NEAR(s.signal_watts, 0.5, 1e-12);
  EXPECT_EQ(s.interference_watts, 0.0);
  EXPECT_NEAR(s.sinr, 5.0, 1e-11);
}

TEST(Sinr, ClusterHoldingWholeLayerHasNoInterference) {
  auto p = default_scenario();
  p.layers.resize(1);
  const Deployment d{{{900, 0}, {0, 1500}}, {{{10, 0}, {0, 12}}}, 2000.0};
  const auto serving = associate(d, p);
  ASSERT_FALSE(serving.is_mbs());
  auto rng = derive_stream(2, 0, StreamKind::kFading);
  const auto s = compute_sinr(d, serving, p, rng);
  EXPECT_EQ(s.interference_watts, 0.0);
  EXPECT_GT(s.signal_watts, 0.0);
}

TEST(Sinr, NoiseAndInterferenceFreeIsAlwaysCovered) {
  auto p = default_scenario();
  p.noise_power_watts = 0.0;
  p.layers.resize(1);
  const Deployment d{{{5, 0}}, {{{800, 0}, {0, 900}}}, 2000.0};
  const auto serving = associate(d, p);
  ASSERT_TRUE(serving.is_mbs());
  auto rng = derive_stream(3, 0, StreamKind::kFading);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(std::isinf(compute_sinr(d, serving, p, rng).sinr));
}

TEST(Sinr, SingleInterfererMeanPower) {
  auto p = default_scenario();
  p.layers.resize(1);
  const Deployment d{{{100, 0}, {0, 300}}, {{{800, 0}, {0, 900}}}, 2000.0};
  const auto serving = associate(d, p);
  ASSERT_TRUE(serving.is_mbs());
  double sum = 0.0;
  constexpr int kDraws = 100'000;
  for (int t = 0; t < kDraws; ++t) {
    auto rng = derive_stream(4, t, StreamKind::kFading);
    sum += compute_sinr(d, serving, p, rng).interference_watts;
  }
  const double expected = p.mbs_power_watts * path_gain(300.0, 4.0);
  EXPECT_NEAR(sum / kDraws, expected, 0.01 * expected);

  auto rng = derive_stream(4, 0, StreamKind::kFading);
  EXPECT_EQ(compute_sinr(d, serving, p, rng, MbsInterference::kNoiseOnly).interference_watts, 0.0);
}

TEST(Coverage, ThresholdLimits) {
  const auto p = default_scenario();
  const std::vector<double> thetas{1e-9, 1e9};
  const auto r = estimate_coverage(p, thetas, 5'000, 1);
  EXPECT_NEAR(r[0].total.value, 1.0, std::max(3.0 * r[0].total.std_error, 1.0 / 5'000));
  EXPECT_NEAR(r[1].total.value, 0.0, std::max(3.0 * r[1].total.std_error, 1.0 / 5'000));
}

TEST(Coverage, SharedTrialsMonotoneInTheta) {
  const auto p = with_density_ratio(default_scenario(), 2.0);
  const std::vector<double> thetas{0.01, 0.1, 0.5, 1, 2, 5, 10, 20, 50, 100};
  const auto r = estimate_coverage(p, thetas, 5'000, 3);
  for (std::size_t i = 1; i < r.size(); ++i) {
    EXPECT_LE(r[i].covered.covered_total(), r[i - 1].covered.covered_total());
    EXPECT_LE(r[i].covered.covered_mbs, r[i - 1].covered.covered_mbs);
    EXPECT_LE(r[i].covered.covered_mbs_noise_only, r[i - 1].covered.covered_mbs_noise_only);
    for (std::size_t l = 0; l < r[i].covered.covered_layers.size(); ++l) {
      EXPECT_LE(r[i].covered.covered_layers[l], r[i - 1].covered.covered_layers[l]);
    }
  }
}

TEST(Coverage, SingleThetaMatchesBatch) {
  const auto p = default_scenario();
  const std::vector<double> thetas{0.5, 5.0};
  const auto batch = estimate_coverage(p, thetas, 2'000, 9);
  const auto single = estimate_coverage(p, 5.0, 2'000, 9);
  EXPECT_EQ(batch[1].covered.covered_total(), single.covered.covered_total());
  EXPECT_EQ(batch[1].covered.covered_layers, single.covered.covered_layers);
}

TEST(Coverage, DecompositionIdentity) {
  const auto p = with_density_ratio(default_scenario(), 2.0);
  const auto r = estimate_coverage(p, 2.0, 5'000, 5);
  const auto& c = r.covered;
  std::int64_t layer_trials = 0;
  for (auto t : r.layer_trials) layer_trials += t;
  EXPECT_EQ(r.mbs_trials + layer_trials, r.trials);
  EXPECT_EQ(c.covered_total(), c.covered_mbs + c.covered_sbs());
  EXPECT_EQ(r.total.value, static_cast<double>(c.covered_total()) / static_cast<double>(r.trials));
  const double p_mbs = static_cast<double>(r.mbs_trials) / r.trials;
  EXPECT_NEAR(r.total.value, p_mbs * r.mbs_conditional.value + (1 - p_mbs) * r.sbs_conditional.value, 1e-15);
}

TEST(Coverage, WorkerCountDoesNotMatter) {
  const auto p = default_scenario();
  const auto a = estimate_coverage(p, 5.0, 3'000, 2, 1);
  const auto b = estimate_coverage(p, 5.0, 3'000, 2, 3);
  EXPECT_EQ(a.covered.covered_mbs, b.covered.covered_mbs);
  EXPECT_EQ(a.covered.covered_layers, b.covered.covered_layers);
  EXPECT_EQ(a.total.value, b.total.value);
}

TEST(Coverage, EmptyClassIsUndefined) {
  const auto p = with_density_ratio(default_scenario(), 0.0);
  const auto r = estimate_coverage(p, 5.0, 500, 1);
  EXPECT_FALSE(r.sbs_conditional.defined);
  for (const auto& l : r.per_layer_conditional) EXPECT_FALSE(l.defined);
  EXPECT_TRUE(r.mbs_conditional.defined);
}

TEST(Coverage, RareClassFlaggedLowConfidence) {
  auto p = with_density_ratio(default_scenario(), 0.0);
  p.layers[9].density_per_m2 = p.mbs_density_per_m2 * 0.01;
  p = with_window_rule(p);
  const auto r = estimate_coverage(p, 5.0, 1'000, 1);
  EXPECT_TRUE(r.per_layer_conditional[9].low_confidence);
  EXPECT_FALSE(r.mbs_conditional.low_confidence);
}

TEST(Coverage, NoiseOnlyMbsMatchesRayleighQuadrature) {
  auto p = with_density_ratio(default_scenario(), 0.0);
  p.noise_power_watts = 1e-10;
  const double theta = 5.0;
  const auto r = estimate_coverage(p, theta, 50'000, 7);
  const double lambda = p.mbs_density_per_m2;
  auto f = [&](double x) {
    return std::exp(-theta * p.noise_power_watts * std::pow(x, 4.0) / p.mbs_power_watts) * 2 * std::numbers::pi *
           lambda * x * std::exp(-lambda * std::numbers::pi * x * x);
  };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 5000.0, 15, 1e-12);
  const auto& e = r.mbs_conditional_noise_only;
  EXPECT_NEAR(e.value, oracle, 3.0 * e.std_error) << oracle;
  EXPECT_GT(oracle, 0.2);
  EXPECT_LT(oracle, 0.9);
}

}  // namespace
}  // namespace hetnet

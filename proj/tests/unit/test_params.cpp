#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hetnet/params.hpp"

namespace hetnet {
namespace {

bool has_violation(const ValidationReport& r, const std::string& field, const std::string& msg) {
  for (const auto& v : r.violations) {
    if (v.field == field && v.message.find(msg) != std::string::npos) return true;
  }
  return false;
}

TEST(Validate, DefaultScenarioPasses) {
  const auto p = default_scenario();
  EXPECT_TRUE(validate(p).ok()) << validate(p).to_string();
  EXPECT_EQ(p.layer_count(), 10);
  EXPECT_EQ(p.cluster_size, 2);
  EXPECT_EQ(p.snr_threshold, 5.0);
  EXPECT_EQ(p.path_loss_exponent, 4.0);
  EXPECT_NEAR(p.mbs_density_per_m2, 1.2732395447e-6, 1e-15);
}

TEST(Validate, AlphaTwoRejected) {
  auto p = default_scenario();
  p.path_loss_exponent = 2.0;
  const auto r = validate(p);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_violation(r, "channel.alpha", "path_loss_exponent must exceed 2"));
}

TEST(Validate, NoLayersRejected) {
  auto p = default_scenario();
  p.layers.clear();
  EXPECT_TRUE(has_violation(validate(p), "layers", "at least one SBS layer"));
}

TEST(Validate, EveryInvariantMutationIsRejected) {
  using Mutation = void (*)(SystemParams&);
  const Mutation mutations[] = {
      [](SystemParams& p) { p.mbs_power_watts = 0.0; },
      [](SystemParams& p) { p.mbs_density_per_m2 = -1.0; },
      [](SystemParams& p) { p.cluster_size = 0; },
      [](SystemParams& p) { p.path_loss_exponent = 1.5; },
      [](SystemParams& p) { p.path_loss_exponent = NAN; },
      [](SystemParams& p) { p.noise_power_watts = -1e-13; },
      [](SystemParams& p) { p.snr_threshold = 0.0; },
      [](SystemParams& p) { p.layers[3].bias = 0.5; },
      [](SystemParams& p) { p.layers[2].tx_power_watts = 0.0; },
      [](SystemParams& p) { p.layers[4].index = 7; },
      [](SystemParams& p) { p.layers[0].density_per_m2 = -2.0; },
      [](SystemParams& p) { p.energy.mbs_capacity_users = 0; },
      [](SystemParams& p) { p.energy.num_users = -1; },
      [](SystemParams& p) { p.energy.backhaul_watts = -0.1; },
      [](SystemParams& p) { p.window_radius_m = 0.0; },
      [](SystemParams& p) { p.window_radius_m = 100.0; },
  };
  for (std::size_t i = 0; i < std::size(mutations); ++i) {
    auto p = default_scenario();
    mutations[i](p);
    EXPECT_FALSE(validate(p).ok()) << "mutation " << i;
    EXPECT_THROW(require_valid(p), InvalidParams) << "mutation " << i;
  }
}

TEST(Validate, UnbiasedLayerAllowed) {
  auto p = with_uniform_bias(default_scenario(), 1.0);
  EXPECT_TRUE(validate(p).ok());
}

TEST(Validate, ZeroDensityLayerAllowed) {
  auto p = default_scenario();
  p.layers[0].density_per_m2 = 0.0;
  EXPECT_TRUE(validate(p).ok());
}

TEST(Validate, ModelCheckIgnoresWindow) {
  auto p = default_scenario();
  p.window_radius_m = 10.0;
  EXPECT_FALSE(validate(p).ok());
  EXPECT_TRUE(validate_model(p).ok());
}

TEST(Window, RuleMeetsTheMinimumCount) {
  for (double ratio : {1.0, 10.0, 100.0}) {
    for (int k : {1, 2, 5}) {
      auto p = with_window_rule(with_cluster_size(with_density_ratio(default_scenario(), ratio), k));
      EXPECT_GE(p.window_radius_m, kMinWindowRadiusM);
      const double area = std::numbers::pi * p.window_radius_m * p.window_radius_m;
      EXPECT_GE(p.mbs_density_per_m2 * area, std::max(100.0, 200.0 * k) * (1 - 1e-12));
      EXPECT_TRUE(validate(p).ok());
    }
  }
}

TEST(Layers, GeometricPowerScheme) {
  const auto layers = make_layers(4, 0.2, 0.5, 3.0, 1e-5);
  ASSERT_EQ(layers.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(layers[i].index, i + 1);
    EXPECT_DOUBLE_EQ(layers[i].tx_power_watts, 0.2 * std::pow(0.5, i));
    EXPECT_EQ(layers[i].bias, 3.0);
    EXPECT_EQ(layers[i].density_per_m2, 1e-5);
  }
  const auto p = default_scenario();
  EXPECT_DOUBLE_EQ(p.layers[0].tx_power_watts, p.mbs_power_watts / 100.0);
  for (std::size_t i = 1; i < p.layers.size(); ++i) {
    EXPECT_LT(p.layers[i].tx_power_watts, p.layers[i - 1].tx_power_watts);
  }
}

TEST(Layers, LookupIsOneBased) {
  const auto p = default_scenario();
  EXPECT_EQ(p.layer(1).index, 1);
  EXPECT_EQ(p.layer(10).index, 10);
  EXPECT_THROW(p.layer(0), std::out_of_range);
  EXPECT_THROW(p.layer(11), std::out_of_range);
}

TEST(Helpers, SweepHelpersOnlyTouchTheirField) {
  const auto p = default_scenario();
  const auto q = with_density_ratio(p, 7.0);
  for (const auto& l : q.layers) EXPECT_DOUBLE_EQ(l.density_per_m2, 7.0 * p.mbs_density_per_m2);
  EXPECT_EQ(q.mbs_density_per_m2, p.mbs_density_per_m2);
  const auto b = with_uniform_bias(p, 8.0);
  for (const auto& l : b.layers) EXPECT_EQ(l.bias, 8.0);
  const auto one = with_layer_count(p, 1);
  ASSERT_EQ(one.layer_count(), 1);
  EXPECT_EQ(one.layers[0], p.layers[0]);
  const auto twelve = with_layer_count(p, 12);
  EXPECT_DOUBLE_EQ(twelve.layers[11].tx_power_watts, p.layers[0].tx_power_watts * std::pow(0.9, 11));
}

}  // namespace
}  // namespace hetnet

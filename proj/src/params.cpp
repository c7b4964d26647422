#include "hetnet/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace hetnet {

const LayerParams& SystemParams::layer(int index) const {
  if (index < 1 || index > layer_count()) {
    throw std::out_of_range(fmt::format("layer index {} outside 1..{}", index, layer_count()));
  }
  return layers[static_cast<std::size_t>(index - 1)];
}

std::string ValidationReport::to_string() const {
  if (ok()) return "pass";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.message;
  }
  return out;
}

InvalidParams::InvalidParams(const ValidationReport& report)
    : std::invalid_argument("invalid parameters: " + report.to_string()), report_(report) {}

namespace {

void check_model(const SystemParams& p, ValidationReport& r) {
  auto add = [&r](std::string field, std::string msg) {
    r.violations.push_back({std::move(field), std::move(msg)});
  };
  auto finite_positive = [](double x) { return std::isfinite(x) && x > 0.0; };

  if (!finite_positive(p.mbs_power_watts)) add("mbs.power_w", "must be positive");
  if (!finite_positive(p.mbs_density_per_m2)) add("mbs.density_per_m2", "must be positive");
  if (p.layers.empty()) add("layers", "at least one SBS layer");
  if (p.cluster_size < 1) add("cluster.k", "cluster size must be at least 1");
  if (!(std::isfinite(p.path_loss_exponent) && p.path_loss_exponent > 2.0)) {
    add("channel.alpha", "path_loss_exponent must exceed 2");
  }
  if (!(std::isfinite(p.noise_power_watts) && p.noise_power_watts >= 0.0)) {
    add("channel.noise_w", "noise power must be non-negative");
  }
  if (!finite_positive(p.snr_threshold)) add("channel.theta", "threshold must be positive");

  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const auto& layer = p.layers[i];
    const std::string path = fmt::format("layers[{}]", i + 1);
    if (layer.index != static_cast<int>(i) + 1) {
      add(path + ".index", fmt::format("expected index {}, got {}", i + 1, layer.index));
    }
    if (!finite_positive(layer.tx_power_watts)) add(path + ".power_w", "must be positive");
    if (!(std::isfinite(layer.bias) && layer.bias >= 1.0)) add(path + ".bias", "bias must be >= 1");
    if (!(std::isfinite(layer.density_per_m2) && layer.density_per_m2 >= 0.0)) {
      add(path + ".density_per_m2", "must be non-negative");
    }
  }

  const auto& e = p.energy;
  if (!(e.mbs_static_watts >= 0.0)) add("energy.mbs_static_w", "must be non-negative");
  if (!(e.sbs_static_watts >= 0.0)) add("energy.sbs_static_w", "must be non-negative");
  if (!(e.backhaul_watts >= 0.0)) add("energy.backhaul_w", "must be non-negative");
  if (e.num_users < 0) add("energy.num_users", "must be non-negative");
  if (e.mbs_capacity_users < 1) add("mbs.capacity_users", "must be at least 1");
}

double min_positive_density(const SystemParams& p) {
  double lo = p.mbs_density_per_m2;
  for (const auto& layer : p.layers) {
    if (layer.density_per_m2 > 0.0) lo = std::min(lo, layer.density_per_m2);
  }
  return lo;
}

double window_target_points(int k) { return std::max(kMinWindowPoints, 200.0 * k); }

}  // namespace

ValidationReport validate_model(const SystemParams& params) {
  ValidationReport r;
  check_model(params, r);
  return r;
}

ValidationReport validate(const SystemParams& params) {
  ValidationReport r = validate_model(params);
  const double radius = params.window_radius_m;
  if (!(std::isfinite(radius) && radius > 0.0)) {
    r.violations.push_back({"sim.window_radius_m", "must be positive"});
    return r;
  }
  const double area = std::numbers::pi * radius * radius;
  if (params.mbs_density_per_m2 > 0.0 && params.mbs_density_per_m2 * area < kMinWindowPoints) {
    r.violations.push_back(
        {"sim.window_radius_m", "window holds fewer than 100 expected MBS points"});
  }
  for (const auto& layer : params.layers) {
    if (layer.density_per_m2 > 0.0 && layer.density_per_m2 * area < kMinWindowPoints) {
      r.violations.push_back({"sim.window_radius_m",
                              fmt::format("window holds fewer than 100 expected points in layer {}",
                                          layer.index)});
    }
  }
  return r;
}

void require_valid(const SystemParams& params) {
  auto report = validate(params);
  if (!report.ok()) throw InvalidParams(report);
}

void require_valid_model(const SystemParams& params) {
  auto report = validate_model(params);
  if (!report.ok()) throw InvalidParams(report);
}

double recommended_window_radius(const SystemParams& params) {
  const double density = min_positive_density(params);
  const double q = window_target_points(params.cluster_size);
  return std::max(kMinWindowRadiusM, std::sqrt(q / (std::numbers::pi * density)));
}

std::vector<LayerParams> make_layers(int count, double base_power_watts, double power_ratio,
                                     double bias, double density_per_m2) {
  std::vector<LayerParams> layers;
  layers.reserve(static_cast<std::size_t>(std::max(count, 0)));
  double power = base_power_watts;
  for (int i = 1; i <= count; ++i) {
    layers.push_back({i, power, bias, density_per_m2});
    power *= power_ratio;
  }
  return layers;
}

SystemParams default_scenario() {
  SystemParams p;
  p.mbs_power_watts = 20.0;
  p.mbs_density_per_m2 = 1.0 / (500.0 * 500.0 * std::numbers::pi);
  p.cluster_size = 2;
  p.path_loss_exponent = 4.0;
  p.noise_power_watts = 1e-13;
  p.snr_threshold = 5.0;
  p.layers = make_layers(10, p.mbs_power_watts / 100.0, kDefaultPowerRatio, kDefaultBias,
                         p.mbs_density_per_m2);
  p.energy = EnergyParams{130.0, 0.45, 0.2, 50, 100};
  p.window_radius_m = recommended_window_radius(p);
  return p;
}

SystemParams with_density_ratio(SystemParams params, double ratio) {
  for (auto& layer : params.layers) layer.density_per_m2 = ratio * params.mbs_density_per_m2;
  return params;
}

SystemParams with_uniform_bias(SystemParams params, double bias) {
  for (auto& layer : params.layers) layer.bias = bias;
  return params;
}

SystemParams with_layer_count(SystemParams params, int count) {
  if (params.layers.empty()) throw std::invalid_argument("no template layer to extend");
  const auto first = params.layers.front();
  const double ratio = params.layers.size() > 1
                           ? params.layers[1].tx_power_watts / first.tx_power_watts
                           : kDefaultPowerRatio;
  params.layers = make_layers(count, first.tx_power_watts, ratio, first.bias, first.density_per_m2);
  return params;
}

SystemParams with_cluster_size(SystemParams params, int k) {
  params.cluster_size = k;
  return params;
}

SystemParams with_window_rule(SystemParams params) {
  params.window_radius_m = recommended_window_radius(params);
  return params;
}

}  // namespace hetnet

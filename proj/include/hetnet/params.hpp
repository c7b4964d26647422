#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

/// One tier of small cells. All stations in a layer share power and bias.
struct LayerParams {
  int index = 1;
  double tx_power_watts = 0.0;
  double bias = 1.0;
  double density_per_m2 = 0.0;

  bool operator==(const LayerParams&) const = default;
};

struct EnergyParams {
  double mbs_static_watts = 0.0;
  double sbs_static_watts = 0.0;
  double backhaul_watts = 0.0;
  int num_users = 0;
  int mbs_capacity_users = 1;

  bool operator==(const EnergyParams&) const = default;
};

struct SystemParams {
  double mbs_power_watts = 0.0;
  double mbs_density_per_m2 = 0.0;
  std::vector<LayerParams> layers;
  int cluster_size = 1;
  double path_loss_exponent = 4.0;
  double noise_power_watts = 0.0;
  double snr_threshold = 1.0;
  double window_radius_m = 0.0;
  EnergyParams energy;

  int layer_count() const { return static_cast<int>(layers.size()); }
  const LayerParams& layer(int index) const;

  bool operator==(const SystemParams&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

class InvalidParams : public std::invalid_argument {
 public:
  explicit InvalidParams(const ValidationReport& report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Minimum expected station count inside the simulation window for each tier
// with positive density.
inline constexpr double kMinWindowPoints = 100.0;
inline constexpr double kMinWindowRadiusM = 3000.0;

/// Checks every model invariant plus the simulation-window rule.
ValidationReport validate(const SystemParams& params);

/// Same as validate() without the window rule. Entry points that never sample
/// a windowed deployment (direct samplers, analytic engine) only need this.
ValidationReport validate_model(const SystemParams& params);

void require_valid(const SystemParams& params);
void require_valid_model(const SystemParams& params);

/// Smallest radius satisfying the window rule: the sparsest positive-density
/// tier holds max(100, 200k) expected points and the radius is >= 3000 m.
double recommended_window_radius(const SystemParams& params);

/// The evaluation scenario used throughout: 10 layers, clusters of 2,
/// lambda_m = 1/(500^2 pi), theta = 5, alpha = 4.
SystemParams default_scenario();

inline constexpr double kDefaultPowerRatio = 0.9;
inline constexpr double kDefaultBias = 4.0;

/// Geometric per-layer power scheme: p_1 = base, p_i = base * ratio^(i-1).
std::vector<LayerParams> make_layers(int count, double base_power_watts, double power_ratio,
                                     double bias, double density_per_m2);

// Sweep helpers. Each returns a modified copy; the window radius is left as is.
SystemParams with_density_ratio(SystemParams params, double ratio);
SystemParams with_uniform_bias(SystemParams params, double bias);
SystemParams with_layer_count(SystemParams params, int count);
SystemParams with_cluster_size(SystemParams params, int k);
SystemParams with_window_rule(SystemParams params);

}  // namespace hetnet

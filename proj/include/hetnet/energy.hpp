#pragma once

#include <stdexcept>
#include <vector>

#include "hetnet/params.hpp"

namespace hetnet {

struct EnergyBreakdown {
  double mbs_total_watts = 0.0;
  double sbs_total_watts = 0.0;
  std::vector<double> per_layer_watts;
  double static_watts = 0.0;    // P_ms
  double load_watts = 0.0;      // n P_m p_MBS / N
  double backhaul_watts = 0.0;  // backhaul part of the SBS total
};

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P_ms + n P_m p_MBS / N.
double mbs_energy(const EnergyParams& e, double mbs_power_watts, double p_mbs_conn);

/// k n p (P_s + P_bkh) for one layer, p being that layer's association share.
double sbs_layer_energy(const EnergyParams& e, int k, double p_sbs_conn);

struct ConnectionShares {
  double p_mbs = 1.0;
  std::vector<double> per_layer;
};

enum class SbsLoadReading {
  kPerLayerShare,  // each layer uses its own share
  kWholeTier,      // each layer uses the whole-tier P_SBS (counts users l times)
};

inline constexpr double kShareTolerance = 1e-9;

/// Per-layer shares must sum to 1 - p_mbs within kShareTolerance.
EnergyBreakdown total_energy(const EnergyParams& e, const SystemParams& params,
                             const ConnectionShares& connection,
                             SbsLoadReading reading = SbsLoadReading::kPerLayerShare);

}  // namespace hetnet

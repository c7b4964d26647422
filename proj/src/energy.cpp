#include "hetnet/energy.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hetnet/propagation.hpp"

namespace hetnet {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("{} = {} is not a probability", what, p));
}

double mbs_load(const EnergyParams& e, double mbs_power_watts, double p) {
  return static_cast<double>(e.num_users) * mbs_power_watts * p /
         static_cast<double>(e.mbs_capacity_users);
}

}  // namespace

double mbs_energy(const EnergyParams& e, double mbs_power_watts, double p_mbs_conn) {
  check_probability(p_mbs_conn, "p_MBS");
  return e.mbs_static_watts + mbs_load(e, mbs_power_watts, p_mbs_conn);
}

double sbs_layer_energy(const EnergyParams& e, int k, double p_sbs_conn) {
  if (k < 1) throw DomainError("cluster size must be at least 1");
  check_probability(p_sbs_conn, "p_SBS");
  return static_cast<double>(k) * static_cast<double>(e.num_users) * p_sbs_conn *
         (e.sbs_static_watts + e.backhaul_watts);
}

EnergyBreakdown total_energy(const EnergyParams& e, const SystemParams& params,
                             const ConnectionShares& connection, SbsLoadReading reading) {
  check_probability(connection.p_mbs, "p_MBS");
  if (connection.per_layer.size() != params.layers.size()) {
    throw ConsistencyError(fmt::format("{} shares for {} layers", connection.per_layer.size(),
                                       params.layers.size()));
  }
  const double p_sbs = 1.0 - connection.p_mbs;
  const double share_sum = std::accumulate(connection.per_layer.begin(), connection.per_layer.end(), 0.0);
  if (std::abs(share_sum - p_sbs) > kShareTolerance) {
    throw ConsistencyError(
        fmt::format("layer shares sum to {:.12g}, expected 1 - p_MBS = {:.12g}", share_sum, p_sbs));
  }

  EnergyBreakdown out;
  out.static_watts = e.mbs_static_watts;
  out.load_watts = mbs_load(e, params.mbs_power_watts, connection.p_mbs);
  out.mbs_total_watts = out.static_watts + out.load_watts;

  const int k = params.cluster_size;
  double backhaul = 0.0;
  for (double share : connection.per_layer) {
    const double p = reading == SbsLoadReading::kPerLayerShare ? share : p_sbs;
    out.per_layer_watts.push_back(sbs_layer_energy(e, k, p));
    backhaul += static_cast<double>(k) * static_cast<double>(e.num_users) * p * e.backhaul_watts;
  }
  out.sbs_total_watts = std::accumulate(out.per_layer_watts.begin(), out.per_layer_watts.end(), 0.0);
  out.backhaul_watts = backhaul;
  return out;
}

}  // namespace hetnet

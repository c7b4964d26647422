#include "hetnet/analytic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "hetnet/propagation.hpp"

namespace hetnet {

namespace {

constexpr double kPi = std::numbers::pi;

double sum_path_gain(const OrderedDistances& r, double alpha) {
  double sum = 0.0;
  for (double v : r.values) sum += path_gain(v, alpha);
  return sum;
}

// exp(-lambda_m pi eta^(2/alpha)), the probability that the nearest MBS is
// farther than eta^(1/alpha).
double mbs_loses(const SystemParams& params, const LayerParams& layer, double cluster_gain) {
  const double eta = params.mbs_power_watts / (layer.bias * layer.tx_power_watts * cluster_gain);
  return std::exp(-params.mbs_density_per_m2 * kPi * std::pow(eta, 2.0 / params.path_loss_exponent));
}

struct MomentSums {
  std::int64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const MomentSums& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

// Sums for the self-normalised estimator sum(w g) / sum(w).
struct RatioSums {
  std::int64_t n = 0;
  std::int64_t evaluations = 0;
  double w = 0.0, w2 = 0.0, wg = 0.0, w2g = 0.0, w2g2 = 0.0;

  void add(double weight, double g) {
    ++n;
    w += weight;
    w2 += weight * weight;
    wg += weight * g;
    w2g += weight * weight * g;
    w2g2 += weight * weight * g * g;
  }
  void merge(const RatioSums& o) {
    n += o.n;
    evaluations += o.evaluations;
    w += o.w;
    w2 += o.w2;
    wg += o.wg;
    w2g += o.w2g;
    w2g2 += o.w2g2;
  }

  IntegralEstimate estimate() const {
    IntegralEstimate e;
    e.method = IntegrationMethod::kImportanceSampling;
    e.evaluations = std::max(evaluations, n);
    if (!(w > 0.0)) {
      // Conditioning event never observed; the conditional value is unknown.
      e.value = 0.0;
      e.abs_error_bound = 1.0;
      return e;
    }
    const double nn = static_cast<double>(n);
    e.value = wg / w;
    const double resid = std::max(0.0, w2g2 - 2.0 * e.value * w2g + e.value * e.value * w2);
    const double mean_w = w / nn;
    e.abs_error_bound = n > 1 ? std::sqrt(resid / (nn * (nn - 1.0))) / mean_w : 0.0;
    return e;
  }
};

IntegralEstimate from_moments(const MomentSums& m) {
  const auto mc = MonteCarloEstimate::from_moments(m.sum, m.sum_sq, m.n, 0);
  return {mc.value, mc.std_error, IntegrationMethod::kImportanceSampling, m.n};
}

RandomStream importance_stream(std::uint64_t seed, std::int64_t sample, std::uint64_t channel) {
  return derive_stream(seed, static_cast<std::uint64_t>(sample), StreamKind::kImportance,
                       channel << 32);
}

// Stream channels used by the analytic engine.
constexpr std::uint64_t kConnectionChannel = 0x100;
constexpr std::uint64_t kLayerCoverageChannel = 0x200;
constexpr std::uint64_t kMbsCoverageChannel = 0x300;

// k-NN distances whose first arrival is the inverse exponential CDF at
// `stratum`. With stratum = (t + U) / n over samples t = 0..n-1 the first
// arrival is stratified; the iid standard error then overstates the error.
OrderedDistances stratified_ordered_distances(double density, int k, double stratum, RandomStream& rng) {
  const double scale = 1.0 / (kPi * density);
  OrderedDistances out;
  out.values.reserve(static_cast<std::size_t>(k));
  double arrival = -std::log1p(-std::min(stratum, 1.0 - 1e-16));
  for (int j = 0; j < k; ++j) {
    if (j > 0) arrival += rng.unit_exponential();
    out.values.push_back(std::sqrt(arrival * scale));
  }
  return out;
}

void require_samples(std::int64_t samples) {
  if (samples < 2) throw std::invalid_argument("need at least two importance samples");
}

}  // namespace

double knn_joint_pdf(const OrderedDistances& distances, double density) {
  const auto& r = distances.values;
  if (r.empty()) throw DomainError("no distances");
  double prev = 0.0;
  double log_prod = 0.0;
  for (double v : r) {
    if (!(v > prev)) throw DomainError("distances must be positive and strictly increasing");
    log_prod += std::log(v);
    prev = v;
  }
  if (density <= 0.0) return 0.0;
  const double k = static_cast<double>(r.size());
  return std::exp(k * std::log(2.0 * kPi * density) - density * kPi * r.back() * r.back() + log_prod);
}

IntegralEstimate connection_prob_layer(const SystemParams& params, int layer, std::int64_t samples,
                                       std::uint64_t seed) {
  require_valid_model(params);
  require_samples(samples);
  const auto& lp = params.layer(layer);
  if (lp.density_per_m2 <= 0.0) return {0.0, 0.0, IntegrationMethod::kImportanceSampling, 0};
  const auto channel = kConnectionChannel + static_cast<std::uint64_t>(layer);
  auto sums = run_trials<MomentSums>(samples, default_workers(), [&](std::int64_t t, MomentSums& m) {
    auto rng = importance_stream(seed, t, channel);
    const double stratum = (static_cast<double>(t) + rng.uniform()) / static_cast<double>(samples);
    const auto r = stratified_ordered_distances(lp.density_per_m2, params.cluster_size, stratum, rng);
    m.add(mbs_loses(params, lp, sum_path_gain(r, params.path_loss_exponent)));
  });
  return from_moments(sums);
}

double connection_prob_layer_closed_form(const SystemParams& params, int layer) {
  if (params.cluster_size != 1) throw std::invalid_argument("closed form needs cluster size 1");
  const auto& lp = params.layer(layer);
  const double e = 2.0 / params.path_loss_exponent;
  const double s = lp.density_per_m2 * std::pow(lp.bias * lp.tx_power_watts, e);
  const double m = params.mbs_density_per_m2 * std::pow(params.mbs_power_watts, e);
  return s / (s + m);
}

ProductFormConnection connection_prob_mbs_product(const SystemParams& params, std::int64_t samples,
                                                  std::uint64_t seed) {
  ProductFormConnection out;
  double product = 1.0;
  for (int i = 1; i <= params.layer_count(); ++i) {
    out.per_layer.push_back(connection_prob_layer(params, i, samples, seed));
    product *= 1.0 - out.per_layer.back().value;
  }
  // First-order propagation: |d prod / d P_i| = prod_{j != i} (1 - P_j).
  double err = 0.0;
  std::int64_t evals = 0;
  for (std::size_t i = 0; i < out.per_layer.size(); ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < out.per_layer.size(); ++j) {
      if (j != i) others *= 1.0 - out.per_layer[j].value;
    }
    err += others * out.per_layer[i].abs_error_bound;
    evals += out.per_layer[i].evaluations;
  }
  out.p_mbs = {product, err, IntegrationMethod::kImportanceSampling, evals};
  return out;
}

double independence_gap(const ProductFormConnection& product, const MonteCarloEstimate& mc_p_mbs) {
  return std::abs(product.p_mbs.value - mc_p_mbs.value);
}

IntegralEstimate interference_laplace_estimate(double s, double density, double power_watts,
                                               double exclusion_radius, double alpha) {
  if (!(exclusion_radius > 0.0)) throw DomainError("exclusion radius must be positive");
  if (!(alpha > 2.0)) throw DomainError("path loss exponent must exceed 2");
  if (s < 0.0 || density < 0.0 || power_watts < 0.0) throw DomainError("negative argument");
  IntegralEstimate e{1.0, 0.0, IntegrationMethod::kQuadrature, 0};
  if (s == 0.0 || density == 0.0 || power_watts == 0.0) return e;

  // With x = (v / r0)^-(alpha - 2) the tail integral becomes
  //   r0^2 a / (alpha - 2) * int_0^1 dx / (1 + a x^(alpha / (alpha - 2))),
  // a = s p r0^-alpha, whose integrand is smooth and bounded on [0, 1].
  const double a = s * power_watts * std::pow(exclusion_radius, -alpha);
  const double q = alpha / (alpha - 2.0);
  std::int64_t evals = 0;
  auto f = [&](double x) {
    ++evals;
    return 1.0 / (1.0 + a * std::pow(x, q));
  };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 20, 1e-13, &err);
  const double prefactor = 2.0 * kPi * density * exclusion_radius * exclusion_radius * a / (alpha - 2.0);
  const double exponent_err = prefactor * err;
  if (!(exponent_err <= kLaplaceTolerance) || !std::isfinite(integral)) {
    throw QuadratureFailure(
        fmt::format("Laplace quadrature error {:.3g} exceeds {:.1g}", exponent_err, kLaplaceTolerance));
  }
  const double value = std::exp(-prefactor * integral);
  e.value = value;
  e.abs_error_bound = value * exponent_err;
  e.evaluations = evals;
  return e;
}

double interference_laplace(double s, double density, double power_watts, double exclusion_radius,
                            double alpha) {
  return interference_laplace_estimate(s, density, power_watts, exclusion_radius, alpha).value;
}

IntegralEstimate coverage_prob_layer(const SystemParams& params, int layer, double theta,
                                     std::int64_t samples, std::uint64_t seed) {
  require_valid_model(params);
  require_samples(samples);
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const auto& lp = params.layer(layer);
  if (lp.density_per_m2 <= 0.0) return {0.0, 1.0, IntegrationMethod::kImportanceSampling, 0};
  const double alpha = params.path_loss_exponent;
  const double noise = params.noise_power_watts;
  const auto channel = kLayerCoverageChannel + static_cast<std::uint64_t>(layer);

  auto sums = run_trials<RatioSums>(samples, default_workers(), [&](std::int64_t t, RatioSums& acc) {
    auto rng = importance_stream(seed, t, channel);
    const auto r = sample_ordered_distances_direct(lp.density_per_m2, params.cluster_size, rng);
    const double gain = sum_path_gain(r, alpha);
    const double weight = mbs_loses(params, lp, gain);
    double g = 0.0;
    if (weight > 0.0) {
      const double signal_mean = lp.tx_power_watts * gain;
      const auto laplace = interference_laplace_estimate(theta / signal_mean, lp.density_per_m2,
                                                         lp.tx_power_watts, r.farthest(), alpha);
      acc.evaluations += laplace.evaluations;
      g = std::exp(-theta * noise / signal_mean) * laplace.value;
    }
    acc.add(weight, g);
  });
  return sums.estimate();
}

IntegralEstimate coverage_prob_mbs(const SystemParams& params, double theta, std::int64_t samples,
                                   std::uint64_t seed) {
  require_valid_model(params);
  require_samples(samples);
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const double alpha = params.path_loss_exponent;
  const int k = params.cluster_size;

  auto sums = run_trials<RatioSums>(samples, default_workers(), [&](std::int64_t t, RatioSums& acc) {
    auto rng = importance_stream(seed, t, kMbsCoverageChannel);
    const double r_m = sample_nearest_distance(params.mbs_density_per_m2, rng);
    const double mbs_rss = params.mbs_power_watts * path_gain(r_m, alpha);
    // Prob(MBS beats every layer | r_m): layers are independent given r_m.
    // Each factor conditions on the first k - 1 cluster distances and
    // integrates the k-th one exactly.
    double weight = 1.0;
    for (const auto& lp : params.layers) {
      if (lp.density_per_m2 <= 0.0) continue;
      const double scale = kPi * lp.density_per_m2;
      double arrival = 0.0;
      double partial = 0.0;
      for (int j = 0; j + 1 < k; ++j) {
        arrival += rng.unit_exponential();
        partial += path_gain(std::sqrt(arrival / scale), alpha);
      }
      const double budget = mbs_rss / (lp.bias * lp.tx_power_watts) - partial;
      if (!(budget > 0.0)) {
        weight = 0.0;
        continue;
      }
      const double r_min = std::pow(budget, -1.0 / alpha);
      weight *= std::exp(-std::max(0.0, scale * r_min * r_min - arrival));
    }
    const double g = std::exp(-theta * params.noise_power_watts / mbs_rss);
    acc.add(weight, g);
  });
  return sums.estimate();
}

std::vector<double> product_form_shares(const ProductFormConnection& product) {
  double sum = 0.0;
  for (const auto& p : product.per_layer) sum += p.value;
  std::vector<double> shares(product.per_layer.size(), 0.0);
  if (!(sum > 0.0)) return shares;
  const double p_sbs = 1.0 - product.p_mbs.value;
  for (std::size_t i = 0; i < shares.size(); ++i) shares[i] = p_sbs * product.per_layer[i].value / sum;
  return shares;
}

TotalCoverage total_coverage(const SystemParams& params, double theta, std::int64_t samples,
                             std::uint64_t seed, LayerWeighting weighting) {
  TotalCoverage out;
  const auto connection = connection_prob_mbs_product(params, samples, seed);
  out.p_mbs = connection.p_mbs;
  out.layer_shares = product_form_shares(connection);
  out.mbs_term = coverage_prob_mbs(params, theta, samples, seed);

  const double p_mbs = out.p_mbs.value;
  double value = p_mbs * out.mbs_term.value;
  double err = p_mbs * out.mbs_term.abs_error_bound;
  double layer_mass = 0.0;
  double layer_weight = 0.0;
  std::int64_t evals = out.p_mbs.evaluations + out.mbs_term.evaluations;
  for (int i = 1; i <= params.layer_count(); ++i) {
    const auto idx = static_cast<std::size_t>(i - 1);
    const double weight =
        weighting == LayerWeighting::kShareWeighted ? out.layer_shares[idx] : 1.0 - p_mbs;
    if (weight > 0.0) {
      out.layer_terms.push_back(coverage_prob_layer(params, i, theta, samples, seed));
    } else {
      out.layer_terms.push_back({0.0, 0.0, IntegrationMethod::kImportanceSampling, 0});
    }
    const auto& term = out.layer_terms.back();
    value += weight * term.value;
    err += weight * term.abs_error_bound;
    layer_mass += weight * term.value;
    layer_weight += weight;
    evals += term.evaluations;
  }
  // Moving probability mass between the MBS and the layers changes the total
  // by (mean layer term - MBS term) per unit of P_MBS.
  const double mean_layer = layer_weight > 0.0 ? layer_mass / layer_weight : 0.0;
  err += std::abs(out.mbs_term.value - mean_layer) * out.p_mbs.abs_error_bound;
  out.total = {value, err, IntegrationMethod::kImportanceSampling, evals};
  return out;
}

}  // namespace hetnet

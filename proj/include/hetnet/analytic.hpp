#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hetnet/geometry.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/params.hpp"

namespace hetnet {

enum class IntegrationMethod { kQuadrature, kImportanceSampling };

/// An evaluated integral. abs_error_bound is the quadrature error estimate or,
/// for importance sampling, the standard error.
struct IntegralEstimate {
  double value = 0.0;
  double abs_error_bound = 0.0;
  IntegrationMethod method = IntegrationMethod::kImportanceSampling;
  std::int64_t evaluations = 0;
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kDefaultImportanceSamples = 100'000;
inline constexpr std::uint64_t kDefaultAnalyticSeed = 0x5eed'a11a'17c0ULL;
inline constexpr double kLaplaceTolerance = 1e-8;

/// Joint density of the k nearest distances of a PPP with the given density:
/// (2 pi lambda)^k exp(-lambda pi r_k^2) prod_j r_j on 0 < r_1 < ... < r_k.
double knn_joint_pdf(const OrderedDistances& distances, double density);

/// Probability that the layer's cluster beats the nearest MBS (ignoring the
/// other layers): E[exp(-lambda_m pi eta^(2/alpha))] over the cluster
/// distance law, eta = p_m / (beta p sum_j r_j^-alpha).
IntegralEstimate connection_prob_layer(const SystemParams& params, int layer,
                                       std::int64_t samples = kDefaultImportanceSamples,
                                       std::uint64_t seed = kDefaultAnalyticSeed);

/// Closed form of connection_prob_layer for k = 1:
/// lambda_s (beta p)^(2/alpha) / (lambda_s (beta p)^(2/alpha) + lambda_m p_m^(2/alpha)).
double connection_prob_layer_closed_form(const SystemParams& params, int layer);

/// Product-of-complements P_MBS = prod_i (1 - P_i), which treats the layer
/// comparisons as independent even though they share the MBS distance.
struct ProductFormConnection {
  IntegralEstimate p_mbs;
  std::vector<IntegralEstimate> per_layer;  // pairwise P_i
};

ProductFormConnection connection_prob_mbs_product(const SystemParams& params,
                                                  std::int64_t samples = kDefaultImportanceSamples,
                                                  std::uint64_t seed = kDefaultAnalyticSeed);

/// |product form - Monte Carlo joint P_MBS|.
double independence_gap(const ProductFormConnection& product, const MonteCarloEstimate& mc_p_mbs);

/// Laplace transform of Rayleigh-faded PPP interference from stations of the
/// given power and density beyond exclusion_radius, evaluated at s:
/// exp(-2 pi lambda int_{r0}^inf s p v^-alpha / (1 + s p v^-alpha) v dv).
double interference_laplace(double s, double density, double power_watts, double exclusion_radius,
                            double alpha);

/// The same with the quadrature diagnostics.
IntegralEstimate interference_laplace_estimate(double s, double density, double power_watts,
                                               double exclusion_radius, double alpha);

/// Coverage of a user served by the layer's cluster, conditioned on the
/// cluster beating the MBS. Interference is the layer outside r_k; bias does
/// not enter the SINR.
IntegralEstimate coverage_prob_layer(const SystemParams& params, int layer, double theta,
                                     std::int64_t samples = kDefaultImportanceSamples,
                                     std::uint64_t seed = kDefaultAnalyticSeed);

/// Noise-limited coverage exp(-theta sigma^2 r^alpha / p_m) of an MBS-served
/// user, over the MBS distance law conditioned on the MBS beating every layer.
IntegralEstimate coverage_prob_mbs(const SystemParams& params, double theta,
                                   std::int64_t samples = kDefaultImportanceSamples,
                                   std::uint64_t seed = kDefaultAnalyticSeed);

enum class LayerWeighting {
  kShareWeighted,  // layer terms weighted by per-layer association shares
  kLiteralSum,     // P_SBS * sum_i P_s(i); can exceed 1
};

struct TotalCoverage {
  IntegralEstimate total;
  IntegralEstimate p_mbs;
  IntegralEstimate mbs_term;
  std::vector<IntegralEstimate> layer_terms;
  std::vector<double> layer_shares;
};

/// P_MBS P_m + sum_i share_i P_s(i) with the product-form P_MBS and shares
/// share_i = (1 - P_MBS) P_i / sum_j P_j.
TotalCoverage total_coverage(const SystemParams& params, double theta,
                             std::int64_t samples = kDefaultImportanceSamples,
                             std::uint64_t seed = kDefaultAnalyticSeed,
                             LayerWeighting weighting = LayerWeighting::kShareWeighted);

/// Per-layer association shares implied by the product form.
std::vector<double> product_form_shares(const ProductFormConnection& product);

}  // namespace hetnet

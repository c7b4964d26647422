#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace hetnet::testing {

struct GofResult {
  double statistic = 0.0;
  double p_value = 0.0;
  int dof = 0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
GofResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov survival function with Stephens' small-n correction.
double kolmogorov_p_value(double d, std::size_t n);

/// Pearson chi-square of integer counts against Poisson(mean). Tail cells are
/// pooled so every cell expects at least 5 observations.
GofResult chi_square_poisson(const std::vector<std::int64_t>& counts, double mean);

double erlang_cdf(int k, double x);
double unit_exponential_cdf(double x);

}  // namespace hetnet::testing

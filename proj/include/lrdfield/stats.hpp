#pragma once

#include <functional>
#include <vector>

namespace lrdfield {

struct KsResult {
  double distance = 0.0;
  double p_value = 1.0;
};

// Tail of the asymptotic Kolmogorov distribution, Q(lambda) = 2 sum
// (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

// One-sample KS against an arbitrary continuous CDF; >= 50 samples.
KsResult ks_distance(const std::vector<double>& samples, const std::function<double(double)>& cdf);

KsResult ks_distance_normal(const std::vector<double>& samples);
KsResult ks_distance_uniform_half(const std::vector<double>& samples);  // Uniform[0, 1/2]

// Two-sample KS with the asymptotic p-value at the effective sample size.
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments sample_moments(const std::vector<double>& samples);

}  // namespace lrdfield

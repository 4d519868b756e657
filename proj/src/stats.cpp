#include "lrdfield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lrdfield/mathutil.hpp"

namespace lrdfield {

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_distance(const std::vector<double>& samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 50) throw std::invalid_argument("ks_distance: need >= 50 samples");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double n = double(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double f = cdf(sorted[i]);
    d = std::max(d, std::max(f - double(i) / n, double(i + 1) / n - f));
  }
  KsResult r;
  r.distance = d;
  r.p_value = kolmogorov_tail(std::sqrt(n) * d);
  return r;
}

KsResult ks_distance_normal(const std::vector<double>& samples) {
  return ks_distance(samples, [](double x) { return normal_cdf(x); });
}

KsResult ks_distance_uniform_half(const std::vector<double>& samples) {
  return ks_distance(samples, [](double x) { return std::clamp(2.0 * x, 0.0, 1.0); });
}

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 50 || b.size() < 50) throw std::invalid_argument("ks_two_sample: need >= 50 samples");
  std::vector<double> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / sa.size() - double(j) / sb.size()));
  }
  double ne = double(sa.size()) * double(sb.size()) / double(sa.size() + sb.size());
  KsResult r;
  r.distance = d;
  r.p_value = kolmogorov_tail(std::sqrt(ne) * d);
  return r;
}

Moments sample_moments(const std::vector<double>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("sample_moments: need >= 2 samples");
  const double n = double(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Moments mo;
  mo.mean = mean;
  mo.variance = m2 * n / (n - 1.0);
  mo.skewness = (m2 > 0.0) ? m3 / std::pow(m2, 1.5) : 0.0;
  mo.excess_kurtosis = (m2 > 0.0) ? m4 / (m2 * m2) - 3.0 : 0.0;
  return mo;
}

}  // namespace lrdfield

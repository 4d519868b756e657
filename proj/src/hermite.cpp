#include "lrdfield/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include "lrdfield/mathutil.hpp"
#include "lrdfield/quadrature.hpp"

namespace lrdfield {

namespace {
// phi(x) decays below 1e-37 past |x| = 13; with the Cramer bound on H_k
// the truncated tails are < 1e-14 for every k handled here.
constexpr double kSupportBound = 13.0;
}  // namespace

double hermite_eval(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_eval: k must be >= 0");
  if (k > 60) throw std::out_of_range("hermite_eval: k > 60 overflows the recurrence");
  if (k == 0) return 1.0;
  if (k == 1) return x;
  double hkm1 = 1.0, hk = x;
  for (int j = 1; j < k; ++j) {
    double hkp1 = x * hk - j * hkm1;
    hkm1 = hk;
    hk = hkp1;
  }
  return hk;
}

namespace {

// int_a^b H_k(x) phi(x) dx by node doubling; integrand is smooth.
double hermite_phi_panel(int k, double a, double b) {
  return integrate_doubling([k](double x) { return hermite_eval(k, x) * normal_pdf(x); }, a, b);
}

double indicator_projection(const Subordinator& f, double u, double sigma, int k) {
  // <1{f(sigma .) >= u}, H_k>_phi with the domain split at the indicator
  // roots, so each panel integrates a smooth function.
  auto intervals = f.excursion_intervals(u, kSupportBound * sigma);
  double s = 0.0;
  for (auto [lo, hi] : intervals) {
    double a = std::max(lo / sigma, -kSupportBound);
    double b = std::min(hi / sigma, kSupportBound);
    if (a < b) s += hermite_phi_panel(k, a, b);
  }
  return s;
}

double factorial_sqrt(int k) {
  return std::exp(0.5 * std::lgamma(double(k) + 1.0));
}

}  // namespace

double hermite_coefficient(const Subordinator& f, double u, double sigma, int k) {
  if (sigma <= 0.0) throw std::invalid_argument("hermite_coefficient: sigma must be > 0");
  if (k < 0) throw std::invalid_argument("hermite_coefficient: k must be >= 0");
  if (f.monotone()) {
    double c = f.generalized_inverse(u) / sigma;
    if (k == 0) return std::isinf(c) ? (c < 0.0 ? 1.0 : 0.0) : normal_tail(c);
    if (std::isinf(c)) return 0.0;
    if (k == 1) return normal_pdf(c);
    // int_c^inf H_k phi = H_{k-1}(c) phi(c) for k >= 1
    return hermite_eval(k - 1, c) * normal_pdf(c) / factorial_sqrt(k);
  }
  return indicator_projection(f, u, sigma, k) / factorial_sqrt(k);
}

RankResult hermite_rank(const Subordinator& f, double u, double sigma, double tol, int k_max) {
  if (tol <= 0.0) throw std::invalid_argument("hermite_rank: tol must be > 0");
  RankResult r;
  for (int k = 1; k <= k_max; ++k) {
    double proj = hermite_coefficient(f, u, sigma, k) * factorial_sqrt(k);
    if (std::abs(proj) > tol) {
      r.rank = k;
      r.detected = true;
      return r;
    }
  }
  return r;
}

HermiteProfile hermite_profile(const Subordinator& f, double u, double sigma, int order) {
  HermiteProfile p;
  p.truncation_order = order;
  p.level = u;
  p.sigma = sigma;
  p.coefficients.reserve(order + 1);
  for (int k = 0; k <= order; ++k) p.coefficients.push_back(hermite_coefficient(f, u, sigma, k));
  p.rank = hermite_rank(f, u, sigma);
  return p;
}

std::vector<double> HermiteProfile::energy_partial_sums() const {
  std::vector<double> sums;
  sums.reserve(coefficients.size());
  double s = 0.0;
  for (double a : coefficients) {
    s += a * a;
    sums.push_back(s);
  }
  return sums;
}

double hermite_inner_product(int k, int l) {
  // Gauss-Hermite with enough nodes is exact for the polynomial integrand;
  // only summation rounding remains.
  const GaussHermiteRule& rule = gauss_hermite_rule(k + l + 4);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * hermite_eval(k, rule.nodes[i]) * hermite_eval(l, rule.nodes[i]);
  return s;
}

}  // namespace lrdfield

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lrdfield {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Standard normal density.
inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Standard normal CDF via erfc (accurate in both tails).
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Tail probability Psi(x) = P(N(0,1) >= x).
inline double normal_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

// Inverse of the standard normal CDF, Wichura's AS241 (PPND16).
double normal_quantile(double p);

// Inverse tail: x with normal_tail(x) = p.
inline double normal_tail_inverse(double p) { return -normal_quantile(p); }

inline double beta_function(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Generalized binomial coefficient binom(a, k) for real a, integer k >= 0.
inline double binomial_general(double a, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= (a - j) / (j + 1);
  return v;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares y ~ slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit on (log x, log y); requires positive entries.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lrdfield

#pragma once

#include <optional>
#include <vector>

#include "lrdfield/subordinator.hpp"

namespace lrdfield {

// Probabilists' Hermite polynomial H_k(x) via the three-term recurrence
// H_{k+1} = x H_k - k H_{k-1}, H_0 = 1, H_1 = x. k is capped at 60: past
// that the recurrence overflows double range for large |x|.
double hermite_eval(int k, double x);

// k-th Hermite coefficient of the level indicator of f(sigma * .):
//   a_k = (k!)^{-1/2} * int 1{f(sigma x) >= u} H_k(x) phi(x) dx.
// Monotone nondecreasing f uses the closed forms a_0 = Psi(f^-(u)/sigma),
// a_1 = phi(f^-(u)/sigma); everything else goes through indicator-split
// quadrature with node doubling.
double hermite_coefficient(const Subordinator& f, double u, double sigma, int k);

struct RankResult {
  int rank = 0;          // valid only when detected
  bool detected = false;
};

// Hermite rank: min{k >= 1 : |<F_u, H_k>_phi| > tol}, searched up to k_max.
RankResult hermite_rank(const Subordinator& f, double u, double sigma,
                        double tol = 1e-8, int k_max = 12);

struct HermiteProfile {
  std::vector<double> coefficients;  // a_0 .. a_K
  int truncation_order = 0;
  double level = 0.0;
  double sigma = 1.0;
  RankResult rank;

  // Partial sums of a_k^2 up to each order; nondecreasing, bounded by a_0
  // for indicator integrands.
  std::vector<double> energy_partial_sums() const;
};

HermiteProfile hermite_profile(const Subordinator& f, double u, double sigma, int order);

// <H_k, H_l>_phi by quadrature; equals delta_{kl} k! for exact arithmetic.
double hermite_inner_product(int k, int l);

}  // namespace lrdfield

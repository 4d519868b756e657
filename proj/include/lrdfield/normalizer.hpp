#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lrdfield/covariance.hpp"

namespace lrdfield {

// m! * int C^m(t) prod_l max(r_l - |t_l|, 0) dt over the box prod [0, r_l]:
// the window-weighted covariance integral behind the variance sequences.
// Separable models factor per axis; others use tensorized adaptive panels
// graded toward the covariance stiffness at 0.
double sigma_stationary(const CovarianceModel& model, const std::vector<double>& extents,
                        int order_m, double rel_tol = 1e-6);

// Closed forms for the fGn window integrals of rho_alpha:
//   fgn_rho_integral      = int_{-r}^{r} rho_alpha(v) dv
//   fgn_variance_closed   = int_{-r}^{r} rho_alpha(v) (r - |v|) dv
// Both require r > 1. The windowed integral behaves like 2 r^{2 alpha}.
double fgn_rho_integral(double alpha, double r);
double fgn_variance_closed(double alpha, double r);

// mesh^{2d} * sum_{t,s} a1(t) a1(s) rho(t,s) over an explicit point set.
double sigma_nonstationary(
    const std::function<double(const std::vector<double>&, const std::vector<double>&)>& rho,
    const std::function<double(const std::vector<double>&)>& a1,
    const std::vector<std::vector<double>>& points, double mesh_volume);

// kappa = int_{[-1,1]^d} q(v) prod (1 - |v_l|) dv by graded quadrature.
double lemma28_kappa(const std::function<double(const std::vector<double>&)>& q, int dim);

// Asymptotic sigma_{n,1}^2 = window_volume^2 * kappa * lambda.
double lemma28_normalizer(double kappa, double lambda_value, double window_volume);

enum class NormalizationMethod {
  quadrature,
  closed_form_fgn,
  asymptotic_example27,
  lemma28,
  weighted_nonstationary
};

struct NormalizationPlan {
  NormalizationMethod method = NormalizationMethod::quadrature;
  int order_m = 1;
  double variance = 0.0;   // sigma_{n,m}^2
  double centering = 0.0;
  double error_estimate = 0.0;

  std::string method_name() const;
};

}  // namespace lrdfield

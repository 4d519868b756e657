#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace lrdfield {

// Raised when an adaptive rule cannot reach the requested accuracy.
struct quadrature_error : std::runtime_error {
  double estimate;
  double error_bound;
  quadrature_error(const std::string& what, double est, double err)
      : std::runtime_error(what), estimate(est), error_bound(err) {}
};

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
const std::vector<double>& gauss_legendre_nodes(int n);
const std::vector<double>& gauss_legendre_weights(int n);

// Gauss-Hermite rule for int f(x) phi(x) dx with the standard normal
// weight: sum w_i f(x_i), exact for polynomials of degree <= 2n-1
// (Golub-Welsch on the Jacobi matrix of the probabilists' recurrence).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite_rule(int n);

// Integrate f over [a,b] with one n-point Gauss-Legendre rule.
double gauss_panel(const std::function<double(double)>& f, double a, double b, int n);

// Node-doubling rule on a single panel: n = 8,16,... until successive
// estimates differ by less than abs_tol. Throws quadrature_error past n_max.
double integrate_doubling(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10, int n_max = 4096);

// Composite rule over [0,r] with panel edges graded as r*(j/J)^grade near 0,
// node doubling inside each panel. Suited to integrands that are stiff at 0.
double integrate_graded(const std::function<double(double)>& f, double r,
                        double abs_tol = 1e-10, int panels = 24, double grade = 2.0);

// Dyadic panels [r/2^{k+1}, r/2^k] marching toward 0, for integrable
// endpoint singularities; stops once panel contributions fall below the
// truncation budget. `w_floor` cuts the march early when the offset is no
// longer resolvable against a distant endpoint (bounded integrands only).
double integrate_geometric0(const std::function<double(double)>& f, double r,
                            double abs_tol = 1e-10, double w_floor = 0.0);

// Dyadic panels marching into both endpoints of [a,b]; robust for endpoint
// cusps like |x-a|^{1/2}.
double integrate_double_geometric(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-10);

// Composite over [0,r] split at interior kinks, double-geometric per piece.
double integrate_with_kinks(const std::function<double(double)>& f, double r,
                            const std::vector<double>& kinks, double abs_tol = 1e-10);

}  // namespace lrdfield

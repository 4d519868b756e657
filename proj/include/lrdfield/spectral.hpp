#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lrdfield {

struct pole_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SpecKind { isotropic_powerlaw, anisotropic_product, two_param_scaling };

// Spectral densities with slowly varying factors fixed to 1; the shapes are
// what matter for the limit laws, constants are normalized away downstream.
class SpectralDensity {
 public:
  // g(z) = ||z||^{alpha - d}, alpha in (0, d/m) for a target rank m.
  static SpectralDensity isotropic_powerlaw(double alpha, int dim);
  // g(z) = prod_l |z_l|^{gamma_l - 1}, gamma_l in (0, 1/m).
  static SpectralDensity anisotropic_product(std::vector<double> gamma);
  // g(x,y) = (x^2 + c |y|^{2 H2/H1})^{-H1/2}, d = 2.
  static SpectralDensity two_param_scaling(double h1, double h2, double c);

  int dim() const { return dim_; }
  SpecKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& params() const { return params_; }

  double operator()(const std::vector<double>& x) const;

  // Scaled kernel Q(x) = lim lambda(r)^{-1} sqrt(g(x/r)): the shape that
  // enters the multiple Wiener-Ito limits.
  double limit_kernel(const std::vector<double>& x) const;

  // Largest admissible Hermite rank m with the declared exponents
  // (gamma_l < 1/m, resp. alpha < d/m).
  int max_rank() const;

 private:
  SpectralDensity(SpecKind k, int d, std::vector<double> p, std::string n)
      : kind_(k), dim_(d), params_(std::move(p)), name_(std::move(n)) {}

  SpecKind kind_;
  int dim_;
  std::vector<double> params_;
  std::string name_;
};

double spectral_eval(const SpectralDensity& density, const std::vector<double>& x);

}  // namespace lrdfield

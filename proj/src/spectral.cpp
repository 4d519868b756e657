#include "lrdfield/spectral.hpp"

#include <cmath>

namespace lrdfield {

SpectralDensity SpectralDensity::isotropic_powerlaw(double alpha, int dim) {
  if (alpha <= 0.0 || alpha >= dim) throw std::invalid_argument("isotropic_powerlaw: alpha in (0, d)");
  if (dim < 1 || dim > 3) throw std::invalid_argument("isotropic_powerlaw: dim 1..3");
  return {SpecKind::isotropic_powerlaw, dim, {alpha}, "isotropic_powerlaw"};
}

SpectralDensity SpectralDensity::anisotropic_product(std::vector<double> gamma) {
  if (gamma.empty() || gamma.size() > 3) throw std::invalid_argument("anisotropic_product: 1..3 axes");
  for (double g : gamma)
    if (g <= 0.0 || g >= 1.0) throw std::invalid_argument("anisotropic_product: gamma in (0,1)");
  int d = int(gamma.size());
  return {SpecKind::anisotropic_product, d, std::move(gamma), "anisotropic_product"};
}

SpectralDensity SpectralDensity::two_param_scaling(double h1, double h2, double c) {
  if (h1 <= 0.0 || h2 <= 0.0) throw std::invalid_argument("two_param_scaling: H1, H2 > 0");
  if (h1 * h2 >= h1 + h2) throw std::invalid_argument("two_param_scaling: need H1*H2 < H1+H2");
  if (c <= 0.0) throw std::invalid_argument("two_param_scaling: c > 0");
  return {SpecKind::two_param_scaling, 2, {h1, h2, c}, "two_param_scaling"};
}

double SpectralDensity::operator()(const std::vector<double>& x) const {
  if (int(x.size()) != dim_) throw std::invalid_argument("spectral: dimension mismatch");
  switch (kind_) {
    case SpecKind::isotropic_powerlaw: {
      double n2 = 0.0;
      for (double v : x) n2 += v * v;
      if (n2 == 0.0) throw pole_error("isotropic_powerlaw: singular at the origin");
      return std::pow(std::sqrt(n2), params_[0] - dim_);
    }
    case SpecKind::anisotropic_product: {
      double g = 1.0;
      for (int l = 0; l < dim_; ++l) {
        if (x[l] == 0.0) throw pole_error("anisotropic_product: singular on an axis");
        g *= std::pow(std::abs(x[l]), params_[l] - 1.0);
      }
      return g;
    }
    case SpecKind::two_param_scaling: {
      double h1 = params_[0], h2 = params_[1], c = params_[2];
      double base = x[0] * x[0] + c * std::pow(std::abs(x[1]), 2.0 * h2 / h1);
      if (base == 0.0) throw pole_error("two_param_scaling: singular at the origin");
      return std::pow(base, -0.5 * h1);
    }
  }
  return 0.0;
}

double SpectralDensity::limit_kernel(const std::vector<double>& x) const {
  // With L == 1 the scaled limit of sqrt(g(x/r))/lambda(r) keeps the same
  // power-law shape (balanced scaling regime for two_param_scaling).
  return std::sqrt((*this)(x));
}

int SpectralDensity::max_rank() const {
  switch (kind_) {
    case SpecKind::isotropic_powerlaw: return int(std::floor(dim_ / params_[0] - 1e-12));
    case SpecKind::anisotropic_product: {
      double gmax = 0.0;
      for (double g : params_) gmax = std::max(gmax, g);
      return int(std::floor(1.0 / gmax - 1e-12));
    }
    case SpecKind::two_param_scaling: return 2;
  }
  return 1;
}

double spectral_eval(const SpectralDensity& density, const std::vector<double>& x) {
  return density(x);
}

}  // namespace lrdfield

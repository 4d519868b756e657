#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrdfield {

struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// rho_alpha(s) = |s+1|^{2a} + |s-1|^{2a} - 2|s|^{2a}; the fGn increment
// covariance before the 1/2 normalization. Positive for s >= 0 when a > 1/2.
double rho_alpha(double alpha, double s);

enum class CovKind { power_law_iso, example29_3d, gneiting, separable, fgn_product, exponential };

// Stationary covariance zoo, unit variance at the origin.
class CovarianceModel {
 public:
  // C(t) = (1 + ||t||^2)^{-eta/2}; decays as ||t||^{-eta}.
  static CovarianceModel power_law_iso(double eta, int dim);
  // C(x,y,z) = exp(-|z|) (1 + x^2 + y^2)^{-alpha}, d = 3.
  static CovarianceModel example29_3d(double alpha);
  // Spatio-temporal, last coordinate is time:
  // C(x,t) = (|t|^{2a}+1)^{-1} exp(-||x||^{2g} / (|t|^{2a}+1)^g).
  static CovarianceModel gneiting(double alpha, double gamma, int dim);
  static CovarianceModel separable(CovarianceModel spatial, CovarianceModel temporal);
  // Product fGn covariance: C(u) = prod_i rho_{H_i}(u_i) / 2.
  static CovarianceModel fgn_product(std::vector<double> hurst);
  // C(t) = exp(-theta ||t||).
  static CovarianceModel exponential(double theta, int dim);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool is_separable_product() const;  // factorizes over axes
  bool nonnegative() const { return nonnegative_; }

  // C(t) for stationary lag t.
  double operator()(const std::vector<double>& lag) const;
  double at1(double lag) const;  // d = 1 convenience

  // rho(t,s) = C(t-s).
  double eval(const std::vector<double>& t, const std::vector<double>& s) const;

  // 1-D covariance of axis l (separable kinds only).
  std::function<double(double)> axis_covariance(int axis) const;

  // Interior lag values where the axis covariance has a kink (quadrature
  // splits there); fGn has one at lag 1.
  std::vector<double> axis_kinks(int axis) const;

  // Temporal margin C(0,...,0,t); used by the spatio-temporal checks.
  std::function<double(double)> temporal_margin() const;

  CovKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

 private:
  CovarianceModel(CovKind k, int d, std::vector<double> p, std::string n, bool nn)
      : kind_(k), dim_(d), params_(std::move(p)), name_(std::move(n)), nonnegative_(nn) {}

  CovKind kind_;
  int dim_;
  std::vector<double> params_;
  std::string name_;
  bool nonnegative_;
  std::shared_ptr<CovarianceModel> spatial_, temporal_;  // separable only
};

// cov_eval per the module contract: dimension-checked rho(t,s).
double cov_eval(const CovarianceModel& model, const std::vector<double>& t,
                const std::vector<double>& s);

}  // namespace lrdfield

#pragma once

#include <limits>
#include <string>
#include <vector>

namespace lrdfield {

enum class SubKind { identity, cubic, quadratic, lognormal, signed_exp, square, two_branch };

// Pointwise transform f applied to a Gaussian field, with the metadata the
// expansion machinery needs: monotonicity, evenness, and the level sets
// {x : f(x) >= u} as finite unions of intervals.
class Subordinator {
 public:
  static Subordinator identity();
  static Subordinator cubic(double beta);        // x + beta*x^3
  static Subordinator quadratic(double a);       // x + a*(x^2 - 1)
  static Subordinator lognormal();               // exp(x)
  static Subordinator signed_exp(double beta);   // sgn(x)*(exp(x^2/beta^2)-1)
  static Subordinator square();                  // x^2
  // f1(x) = x on [0,1], f2(x) = c/x on (1,inf), extended evenly in |x|.
  static Subordinator two_branch(double c);

  static Subordinator from_name(const std::string& name, double param);

  double operator()(double x) const;

  SubKind kind() const { return kind_; }
  double param() const { return param_; }
  bool monotone() const { return monotone_; }
  bool even() const { return even_; }
  const std::string& name() const { return name_; }

  // Generalized inverse f^-(u) = inf{y : f(y) >= u}; monotone kinds only.
  // Computed by bracketing + bisection to 1e-12.
  double generalized_inverse(double u) const;

  // {x : f(x) >= u} as ordered disjoint intervals, clipped to [-bound, bound].
  std::vector<std::pair<double, double>> excursion_intervals(double u, double bound) const;

 private:
  Subordinator(SubKind k, double p, bool mono, bool ev, std::string n)
      : kind_(k), param_(p), monotone_(mono), even_(ev), name_(std::move(n)) {}

  SubKind kind_;
  double param_;
  bool monotone_;
  bool even_;
  std::string name_;
};

}  // namespace lrdfield

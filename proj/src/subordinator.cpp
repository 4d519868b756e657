#include "lrdfield/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrdfield {

Subordinator Subordinator::identity() { return {SubKind::identity, 0.0, true, false, "identity"}; }

Subordinator Subordinator::cubic(double beta) {
  if (beta <= 0.0) throw std::invalid_argument("cubic: beta must be > 0");
  return {SubKind::cubic, beta, true, false, "cubic"};
}

Subordinator Subordinator::quadratic(double a) {
  if (a <= 0.0) throw std::invalid_argument("quadratic: a must be > 0");
  return {SubKind::quadratic, a, false, false, "quadratic"};
}

Subordinator Subordinator::lognormal() { return {SubKind::lognormal, 0.0, true, false, "lognormal"}; }

Subordinator Subordinator::signed_exp(double beta) {
  if (beta <= 0.0) throw std::invalid_argument("signed_exp: beta must be > 0");
  return {SubKind::signed_exp, beta, true, false, "signed_exp"};
}

Subordinator Subordinator::square() { return {SubKind::square, 0.0, false, true, "square"}; }

Subordinator Subordinator::two_branch(double c) {
  if (c <= 0.0) throw std::invalid_argument("two_branch: c must be > 0");
  return {SubKind::two_branch, c, false, true, "two_branch"};
}

Subordinator Subordinator::from_name(const std::string& name, double param) {
  if (name == "identity") return identity();
  if (name == "cubic") return cubic(param);
  if (name == "quadratic") return quadratic(param);
  if (name == "lognormal") return lognormal();
  if (name == "signed_exp") return signed_exp(param);
  if (name == "square") return square();
  if (name == "two_branch") return two_branch(param);
  throw std::invalid_argument("unknown subordinator: " + name);
}

double Subordinator::operator()(double x) const {
  switch (kind_) {
    case SubKind::identity: return x;
    case SubKind::cubic: return x + param_ * x * x * x;
    case SubKind::quadratic: return x + param_ * (x * x - 1.0);
    case SubKind::lognormal: return std::exp(x);
    case SubKind::signed_exp: {
      double e = std::exp(x * x / (param_ * param_)) - 1.0;
      return x >= 0.0 ? e : -e;
    }
    case SubKind::square: return x * x;
    case SubKind::two_branch: {
      double a = std::abs(x);
      return a <= 1.0 ? a : param_ / a;
    }
  }
  return 0.0;
}

double Subordinator::generalized_inverse(double u) const {
  if (!monotone_) throw std::logic_error("generalized_inverse: subordinator is not monotone");
  // Closed forms exist for all monotone kinds; bisection is the declared
  // general route and doubles as a cross-check, so use it uniformly.
  if (kind_ == SubKind::lognormal && u <= 0.0) return -std::numeric_limits<double>::infinity();

  double lo = -1.0, hi = 1.0;
  while ((*this)(lo) >= u) {
    lo *= 2.0;
    if (lo < -1e12) return -std::numeric_limits<double>::infinity();
  }
  while ((*this)(hi) < u) {
    hi *= 2.0;
    if (hi > 1e12) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if ((*this)(mid) >= u)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> Subordinator::excursion_intervals(double u, double bound) const {
  std::vector<std::pair<double, double>> iv;
  auto push = [&](double a, double b) {
    a = std::max(a, -bound);
    b = std::min(b, bound);
    if (a < b) iv.emplace_back(a, b);
  };
  switch (kind_) {
    case SubKind::identity:
    case SubKind::cubic:
    case SubKind::lognormal:
    case SubKind::signed_exp: {
      double c = generalized_inverse(u);
      if (std::isinf(c)) {
        if (c < 0.0) push(-bound, bound);  // whole line qualifies
      } else {
        push(c, bound);
      }
      break;
    }
    case SubKind::quadratic: {
      // a*x^2 + x - (a + u) >= 0, upward parabola
      double a = param_;
      double disc = 1.0 + 4.0 * a * (a + u);
      if (disc <= 0.0) {
        push(-bound, bound);
      } else {
        double s = std::sqrt(disc);
        double x_minus = (-1.0 - s) / (2.0 * a);
        double x_plus = (-1.0 + s) / (2.0 * a);
        push(-bound, x_minus);
        push(x_plus, bound);
      }
      break;
    }
    case SubKind::square: {
      if (u <= 0.0) {
        push(-bound, bound);
      } else {
        double c = std::sqrt(u);
        push(-bound, -c);
        push(c, bound);
      }
      break;
    }
    case SubKind::two_branch: {
      // On x >= 0: f rises from 0 to 1 on [0,1], then decays as c/x.
      if (u <= 0.0) {
        push(-bound, bound);
        break;
      }
      bool branch1 = (u <= 1.0);     // {x in [0,1] : x >= u}
      bool branch2 = (u < param_);   // {x > 1 : c/x >= u}
      if (!branch1 && !branch2) break;
      double a = branch1 ? u : 1.0;
      double b = branch2 ? param_ / u : 1.0;
      push(-b, -a);
      push(a, b);
      break;
    }
  }
  std::sort(iv.begin(), iv.end());
  return iv;
}

}  // namespace lrdfield

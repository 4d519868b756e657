#include "lrdfield/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

#include "lrdfield/mathutil.hpp"

namespace lrdfield {

namespace {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on Legendre polynomials; standard construction.
GaussRule build_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

const GaussRule& cached_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int n) { return cached_rule(n).nodes; }
const std::vector<double>& gauss_legendre_weights(int n) { return cached_rule(n).weights; }

const GaussHermiteRule& gauss_hermite_rule(int n) {
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    // x p_k = sqrt(k+1) p_{k+1} + sqrt(k) p_{k-1} for the orthonormal family
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(double(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub);
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton-polish the eigenvalue nodes on the orthonormal recurrence and
    // take Christoffel weights 1 / sum_k p_k(x)^2; high-degree integrands
    // amplify raw eigenvalue error past the orthogonality budget otherwise.
    std::vector<double> p(n + 1);
    auto eval_orthonormal = [&](double x) {
      p[0] = 1.0;
      p[1] = x;
      for (int k = 1; k < n; ++k)
        p[k + 1] = (x * p[k] - std::sqrt(double(k)) * p[k - 1]) / std::sqrt(double(k + 1));
    };
    for (int i = 0; i < n; ++i) {
      double x = solver.eigenvalues()(i);
      for (int it_n = 0; it_n < 4; ++it_n) {
        eval_orthonormal(x);
        double deriv = std::sqrt(double(n)) * p[n - 1];
        if (deriv == 0.0) break;
        x -= p[n] / deriv;
      }
      eval_orthonormal(x);
      double norm = 0.0;
      for (int k = 0; k < n; ++k) norm += p[k] * p[k];
      rule.nodes[i] = x;
      rule.weights[i] = 1.0 / norm;
    }
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int n) {
  const GaussRule& r = cached_rule(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

double integrate_doubling(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int n_max) {
  if (a == b) return 0.0;
  double prev = gauss_panel(f, a, b, 8);
  for (int n = 16; n <= n_max; n *= 2) {
    double cur = gauss_panel(f, a, b, n);
    if (std::abs(cur - prev) < abs_tol) return cur;
    prev = cur;
  }
  double final_err = std::abs(gauss_panel(f, a, b, n_max) - gauss_panel(f, a, b, n_max / 2));
  throw quadrature_error("quadrature did not converge on panel", prev, final_err);
}

double integrate_graded(const std::function<double(double)>& f, double r, double abs_tol,
                        int panels, double grade) {
  if (r <= 0.0) return 0.0;
  double sum = 0.0;
  double per_panel = abs_tol / panels;
  double prev_edge = 0.0;
  for (int j = 1; j <= panels; ++j) {
    double edge = r * std::pow(double(j) / panels, grade);
    sum += integrate_doubling(f, prev_edge, edge, per_panel);
    prev_edge = edge;
  }
  return sum;
}

double integrate_geometric0(const std::function<double(double)>& f, double r, double abs_tol,
                            double w_floor) {
  if (r <= 0.0) return 0.0;

  // crude forward bound on the remaining interval (0, hi]: probe the
  // integrand at a few inner offsets; 0 when every probe sits below the
  // representable-offset floor
  auto tail_estimate = [&](double hi_now) {
    double est = 0.0;
    for (double frac : {0.5, 1e-3, 1e-6}) {
      double w = hi_now * frac;
      if (w <= w_floor || w <= 0.0) continue;
      est = std::max(est, std::abs(f(w)) * hi_now);
    }
    return est;
  };

  double sum = 0.0;
  double hi = r;
  double prev = std::numeric_limits<double>::infinity();
  int settled = 0;
  for (int k = 0; k < 2000 && hi > 1e-290; ++k) {
    if (hi <= w_floor) return sum;
    double lo = hi * 0.5;
    double panel = integrate_doubling(f, lo, hi, abs_tol * 0.05);
    sum += panel;
    // Termination needs both a geometric-decay bound from the measured
    // panel ratio and a forward probe: early panels can be zero while all
    // the mass still waits near the endpoint.
    double ap = std::abs(panel);
    if (k >= 3 && ap <= prev) {
      double q = (prev > 0.0) ? ap / prev : 0.0;
      double ratio_bound =
          (q < 0.995) ? ap * q / (1.0 - q) : std::numeric_limits<double>::infinity();
      if (ratio_bound < 0.5 * abs_tol && tail_estimate(lo) < 0.5 * abs_tol)
        ++settled;
      else
        settled = 0;
    } else {
      settled = 0;
    }
    if (settled >= 2) return sum;
    prev = ap;
    hi = lo;
  }
  if (hi <= 1e-290) {
    if (tail_estimate(hi) > 10.0 * abs_tol)
      throw quadrature_error("integrate_geometric0: endpoint singularity too strong", sum, abs_tol);
    return sum;
  }
  throw quadrature_error("integrate_geometric0: did not settle", sum, abs_tol);
}

double integrate_double_geometric(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol) {
  if (b <= a) return 0.0;
  const double mid = 0.5 * (a + b);
  // offsets below the endpoint resolution would evaluate f exactly at the
  // endpoints; integrands here are bounded there, so truncate instead
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor_a = (a == 0.0) ? 0.0 : 32.0 * eps * std::abs(a);
  const double floor_b = (b == 0.0) ? 0.0 : 32.0 * eps * std::abs(b);
  double left =
      integrate_geometric0([&](double w) { return f(a + w); }, mid - a, 0.5 * abs_tol, floor_a);
  double right =
      integrate_geometric0([&](double w) { return f(b - w); }, b - mid, 0.5 * abs_tol, floor_b);
  return left + right;
}

double integrate_with_kinks(const std::function<double(double)>& f, double r,
                            const std::vector<double>& kinks, double abs_tol) {
  std::vector<double> edges{0.0};
  for (double k : kinks)
    if (k > 0.0 && k < r) edges.push_back(k);
  edges.push_back(r);
  std::sort(edges.begin(), edges.end());
  double sum = 0.0;
  double per_piece = abs_tol / double(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    sum += integrate_double_geometric(f, edges[i], edges[i + 1], per_piece);
  return sum;
}

namespace {
double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}
}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) throw std::invalid_argument("fit_loglog: nonpositive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

double normal_quantile(double p) {
  // Wichura (1988), algorithm AS241, PPND16.
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

}  // namespace lrdfield

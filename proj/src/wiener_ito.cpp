#include "lrdfield/wiener_ito.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <thread>

#include "lrdfield/mathutil.hpp"
#include "lrdfield/rng.hpp"

namespace lrdfield {

namespace {
constexpr std::uint32_t kLaneOracle = 3;

std::complex<double> box_axis_factor(double x) {
  if (std::abs(x) < 1e-8) {
    // (e^{ix}-1)/(ix) = 1 + ix/2 + O(x^2)
    return {1.0 - x * x / 6.0, 0.5 * x};
  }
  return std::complex<double>(std::sin(x) / x, (1.0 - std::cos(x)) / x);
}

double ball_volume(int d) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double bessel_j_half_order(int d, double r) {
  // J_{d/2}(r) for d = 1,2,3
  if (d == 1) return std::sqrt(2.0 / (kPi * r)) * std::sin(r);
  if (d == 2) return std::cyl_bessel_j(1.0, r);
  return std::sqrt(2.0 / (kPi * r)) * (std::sin(r) / r - std::cos(r));
}
}  // namespace

std::complex<double> window_kernel(WindowShape shape, const std::vector<double>& x) {
  if (shape == WindowShape::box) {
    std::complex<double> k{1.0, 0.0};
    for (double xl : x) k *= box_axis_factor(xl);
    return k;
  }
  const int d = int(x.size());
  double r = 0.0;
  for (double xl : x) r += xl * xl;
  r = std::sqrt(r);
  if (r < 1e-6) return {ball_volume(d), 0.0};
  double v = std::pow(2.0 * kPi, 0.5 * d) * bessel_j_half_order(d, r) / std::pow(r, 0.5 * d);
  return {v, 0.0};
}

HermiteOracle::CellSet HermiteOracle::build_cells(const SpectralDensity& density,
                                                  const Config& cfg, int refine) const {
  const int per_decade = cfg.cells_per_decade * refine;
  const double u_width = cfg.uniform_width / refine;

  // 1-D half grid edges: geometric, uniform, geometric
  std::vector<double> edges{cfg.x_min};
  auto geometric_to = [&](double target) {
    double from = edges.back();
    if (target <= from) return;
    int steps = std::max(1, int(std::ceil(per_decade * std::log10(target / from))));
    double ratio = std::pow(target / from, 1.0 / steps);
    for (int i = 0; i < steps; ++i) edges.push_back(edges.back() * ratio);
  };
  geometric_to(cfg.x_break);
  if (cfg.uniform_to > edges.back()) {
    int steps = std::max(1, int(std::ceil((cfg.uniform_to - edges.back()) / u_width)));
    double h = (cfg.uniform_to - edges.back()) / steps;
    double base = edges.back();
    for (int i = 1; i <= steps; ++i) edges.push_back(base + i * h);
  }
  geometric_to(cfg.x_max);

  std::vector<double> c1, v1;  // signed 1-D cells: positive then negative
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    bool uniform = (edges[i] >= cfg.x_break && edges[i] < cfg.uniform_to);
    c1.push_back(uniform ? 0.5 * (edges[i] + edges[i + 1]) : std::sqrt(edges[i] * edges[i + 1]));
    v1.push_back(edges[i + 1] - edges[i]);
  }
  const int n1 = int(c1.size());

  CellSet cells;
  if (dim_ == 1) {
    for (int s : {+1, -1})
      for (int i = 0; i < n1; ++i) {
        cells.center.push_back({s * c1[i]});
        cells.volume.push_back(v1[i]);
      }
    const int n = 2 * n1;
    cells.mirror.resize(n);
    for (int i = 0; i < n1; ++i) {
      cells.mirror[i] = n1 + i;
      cells.mirror[n1 + i] = i;
    }
  } else {
    // signed tensor cells over both axes
    std::vector<double> sc, sv;
    for (int s : {+1, -1})
      for (int i = 0; i < n1; ++i) {
        sc.push_back(s * c1[i]);
        sv.push_back(v1[i]);
      }
    const int ns = int(sc.size());
    auto signed_index = [&](int i) { return (i < n1) ? n1 + i : i - n1; };
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b) {
        cells.center.push_back({sc[a], sc[b]});
        cells.volume.push_back(sv[a] * sv[b]);
      }
    const int n = ns * ns;
    cells.mirror.resize(n);
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        cells.mirror[a * ns + b] = signed_index(a) * ns + signed_index(b);
  }
  cells.q.resize(cells.center.size());
  for (std::size_t i = 0; i < cells.center.size(); ++i)
    cells.q[i] = density.limit_kernel(cells.center[i]);
  return cells;
}

double HermiteOracle::norm_squared(const CellSet& cells) const {
  const int n = int(cells.center.size());
  double total = 0.0;
  if (m_ == 2) {
    std::vector<double> sum(dim_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || j == cells.mirror[i]) continue;
        for (int a = 0; a < dim_; ++a) sum[a] = cells.center[i][a] + cells.center[j][a];
        double k2 = std::norm(window_kernel(shape_, sum));
        total += cells.q[i] * cells.q[i] * cells.q[j] * cells.q[j] * k2 * cells.volume[i] *
                 cells.volume[j];
      }
  } else {
    std::vector<double> sum(dim_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || j == cells.mirror[i]) continue;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j || k == cells.mirror[i] || k == cells.mirror[j]) continue;
          for (int a = 0; a < dim_; ++a)
            sum[a] = cells.center[i][a] + cells.center[j][a] + cells.center[k][a];
          double k2 = std::norm(window_kernel(shape_, sum));
          double q2 = cells.q[i] * cells.q[j] * cells.q[k];
          total += q2 * q2 * k2 * cells.volume[i] * cells.volume[j] * cells.volume[k];
        }
      }
  }
  return total;
}

HermiteOracle::HermiteOracle(const SpectralDensity& density, const Config& cfg)
    : m_(cfg.m), dim_(density.dim()), shape_(cfg.shape) {
  if (m_ != 2 && m_ != 3) throw std::invalid_argument("HermiteOracle: m must be 2 or 3");
  if (dim_ > 2) throw std::invalid_argument("HermiteOracle: dim must be 1 or 2");
  if (density.max_rank() < m_)
    throw std::invalid_argument("HermiteOracle: kernel not square-summable at rank m");

  CellSet cells = build_cells(density, cfg, 1);
  const int n = int(cells.center.size());
  const int cap = (m_ == 2) ? 4096 : 512;
  if (n > cap) throw resolution_error("HermiteOracle: grid too large for order m");

  c_hat_ = norm_squared(cells);
  if (!(c_hat_ > 0.0)) throw resolution_error("HermiteOracle: degenerate kernel norm");

  if (cfg.check_resolution) {
    CellSet fine = build_cells(density, cfg, 2);
    if (int(fine.center.size()) <= cap * 4) {
      c_hat_refined_ = norm_squared(fine);
      double rel = std::abs(c_hat_ - c_hat_refined_) / c_hat_refined_;
      if (rel > 0.05)
        throw resolution_error("HermiteOracle: grid too coarse, kernel norm off by > 5%");
    } else {
      c_hat_refined_ = c_hat_;
    }
  } else {
    c_hat_refined_ = c_hat_;
  }

  center_ = std::move(cells.center);
  volume_ = std::move(cells.volume);
  mirror_ = std::move(cells.mirror);
  q_ = std::move(cells.q);
  for (int i = 0; i < n; ++i)
    if (i < mirror_[i]) positive_.push_back(i);

  if (m_ == 2) {
    pair_kernel_.resize(std::size_t(n) * n);
    std::vector<double> sum(dim_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int a = 0; a < dim_; ++a) sum[a] = center_[i][a] + center_[j][a];
        pair_kernel_[std::size_t(i) * n + j] = q_[i] * q_[j] * window_kernel(shape_, sum);
      }
  }
}

double HermiteOracle::sample(std::uint64_t seed, std::uint32_t draw_index) const {
  return sample_unnormalized(seed, draw_index).real() /
         std::sqrt(std::tgamma(double(m_) + 1.0) * c_hat_);
}

std::complex<double> HermiteOracle::sample_unnormalized(std::uint64_t seed,
                                                        std::uint32_t draw_index) const {
  const int n = int(center_.size());
  PhiloxStream rng(seed, PhiloxStream::stream_id(draw_index, kLaneOracle, 0));
  std::vector<std::complex<double>> w(n);
  for (int i : positive_) {
    double re = rng.normal(), im = rng.normal();
    w[i] = std::complex<double>(re, im) * std::sqrt(0.5 * volume_[i]);
    w[mirror_[i]] = std::conj(w[i]);
  }

  std::complex<double> s{0.0, 0.0};
  if (m_ == 2) {
    // full bilinear form minus the excluded diagonal classes
    for (int i = 0; i < n; ++i) {
      std::complex<double> acc{0.0, 0.0};
      const std::complex<double>* row = &pair_kernel_[std::size_t(i) * n];
      for (int j = 0; j < n; ++j) acc += row[j] * w[j];
      s += w[i] * acc;
      s -= row[i] * w[i] * w[i];
      s -= row[mirror_[i]] * w[i] * w[mirror_[i]];
    }
  } else {
    std::vector<double> sum(dim_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || j == mirror_[i]) continue;
        std::complex<double> wij = w[i] * w[j];
        double qij = q_[i] * q_[j];
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j || k == mirror_[i] || k == mirror_[j]) continue;
          for (int a = 0; a < dim_; ++a) sum[a] = center_[i][a] + center_[j][a] + center_[k][a];
          s += qij * q_[k] * window_kernel(shape_, sum) * wij * w[k];
        }
      }
  }
  return s;
}

HermiteOracle::Cumulants HermiteOracle::exact_cumulants() const {
  if (m_ != 2) throw std::logic_error("exact_cumulants: derived for m == 2 only");
  // The draw is S = g^T A g for iid standard normals g = (xi_p, zeta_p) over
  // the positive cells; cumulants are kappa_p = 2^{p-1} (p-1)! tr(A^p).
  const int np = int(positive_.size());
  const int dim = 2 * np;
  const int n = int(center_.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  auto add = [&](int r, int c, double v) {
    A(r, c) += 0.5 * v;
    A(c, r) += 0.5 * v;
  };
  for (int p = 0; p < np; ++p)
    for (int q = p + 1; q < np; ++q) {
      int i = positive_[p], j = positive_[q];
      std::complex<double> t1 = pair_kernel_[std::size_t(i) * n + j];
      std::complex<double> t2 = pair_kernel_[std::size_t(i) * n + mirror_[j]];
      double s = 2.0 * std::sqrt(volume_[i] * volume_[j]);
      add(2 * p, 2 * q, s * (t1.real() + t2.real()));          // xi_p xi_q
      add(2 * p + 1, 2 * q + 1, s * (-t1.real() + t2.real())); // zeta_p zeta_q
      add(2 * p, 2 * q + 1, s * (-t1.imag() + t2.imag()));     // xi_p zeta_q
      add(2 * p + 1, 2 * q, s * (-t1.imag() - t2.imag()));     // zeta_p xi_q
    }
  Eigen::MatrixXd A2 = A * A;
  double tr2 = A2.trace();
  double tr3 = (A2 * A).trace();
  double tr4 = (A2 * A2).trace();
  double k2 = 2.0 * tr2, k3 = 8.0 * tr3, k4 = 48.0 * tr4;
  Cumulants c;
  c.variance = k2 / (2.0 * c_hat_);  // normalized draw divides by sqrt(2 c_hat)
  c.skewness = k3 / std::pow(k2, 1.5);
  c.excess_kurtosis = k4 / (k2 * k2);
  return c;
}

std::vector<double> HermiteOracle::sample_many(std::uint64_t seed, int n_draws, int threads) const {
  std::vector<double> out(n_draws);
  if (threads <= 1) {
    for (int i = 0; i < n_draws; ++i) out[i] = sample(seed, std::uint32_t(i));
    return out;
  }
  std::vector<std::thread> pool;
  int chunk = (n_draws + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int b0 = t * chunk, b1 = std::min(n_draws, b0 + chunk);
    if (b0 >= b1) break;
    pool.emplace_back([&, b0, b1]() {
      for (int i = b0; i < b1; ++i) out[i] = sample(seed, std::uint32_t(i));
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace lrdfield

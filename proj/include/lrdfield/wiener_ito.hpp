#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "lrdfield/spectral.hpp"

namespace lrdfield {

struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class WindowShape { box, ball };

// Fourier transform of the window indicator. Box is the unit cube [0,1]^d,
// ball is the unit ball B_1(0).
std::complex<double> window_kernel(WindowShape shape, const std::vector<double>& x);

// Discretized m-fold Wiener-Ito integral of prod_j Q(y_j) * K_V(sum y_j):
// symmetric complex Gaussian weights on a geometric frequency grid, the sum
// running over off-diagonal tuples (no cell shared, no mirror pair), scaled
// to unit variance by the discrete kernel norm. One object per kernel;
// draws are cheap and deterministic in (seed, draw index).
class HermiteOracle {
 public:
  // Frequency grid per half axis: geometric cells resolve the kernel
  // singularity below x_break; uniform cells resolve the window-kernel
  // oscillation through the antidiagonal band; geometric cells continue to
  // the outer truncation. The mirror-pair exclusion removes an h-wide slot
  // at s = 0 from every band row, a first-order-in-h bias, so the uniform
  // width sits well below the kernel's pi-scale oscillation.
  struct Config {
    int m = 2;                  // 2 or 3
    WindowShape shape = WindowShape::box;
    double x_min = 1e-4;        // inner truncation per axis
    double x_break = 1.0;       // geometric/uniform switch
    double uniform_to = 128.0;  // band resolved up to here
    double x_max = 2e4;         // outer truncation per axis
    int cells_per_decade = 24;  // geometric sections
    double uniform_width = 0.19634954084936207;  // pi/16
    bool check_resolution = true;  // compare c_hat against a refined grid
  };

  HermiteOracle(const SpectralDensity& density, const Config& cfg);

  double sample(std::uint64_t seed, std::uint32_t draw_index) const;
  std::vector<double> sample_many(std::uint64_t seed, int n_draws, int threads) const;

  // Unnormalized complex sum; the imaginary part vanishes by conjugate
  // symmetry up to rounding.
  std::complex<double> sample_unnormalized(std::uint64_t seed, std::uint32_t draw_index) const;

  double c_hat() const { return c_hat_; }
  double c_hat_refined() const { return c_hat_refined_; }
  int n_cells() const { return int(center_.size()); }
  int dim() const { return dim_; }
  int order() const { return m_; }

  struct Cumulants {
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
  };
  // Exact cumulants of the discretized law via traces of the underlying
  // real quadratic form (m == 2 only). variance refers to the normalized
  // draw and equals 1 up to rounding.
  Cumulants exact_cumulants() const;

 private:
  struct CellSet {
    std::vector<std::vector<double>> center;
    std::vector<double> volume;
    std::vector<int> mirror;
    std::vector<double> q;  // Q at the cell centers
  };
  CellSet build_cells(const SpectralDensity& density, const Config& cfg, int refine) const;
  double norm_squared(const CellSet& cells) const;

  int m_ = 2;
  int dim_ = 1;
  WindowShape shape_ = WindowShape::box;
  double c_hat_ = 0.0;
  double c_hat_refined_ = 0.0;

  std::vector<std::vector<double>> center_;
  std::vector<double> volume_;
  std::vector<int> mirror_;
  std::vector<double> q_;
  std::vector<int> positive_;  // representative half of the mirror pairs

  // m == 2 fast path
  std::vector<std::complex<double>> pair_kernel_;  // row-major n x n, Q_i Q_j K(y_i + y_j)
};

}  // namespace lrdfield

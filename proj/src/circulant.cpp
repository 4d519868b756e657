#include "lrdfield/circulant.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace lrdfield {

namespace {

std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe

// In-place complex transform. BACKWARD sign convention, unnormalized.
void fft_inplace(std::vector<std::complex<double>>& data, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_1d(int(data.size()), reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace

int next_fast_size(int n) {
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

CirculantFactor1D::CirculantFactor1D(const std::function<double(double)>& cov, int n_points,
                                     double mesh, int max_doublings, double rel_tol) {
  if (n_points < 2) throw std::invalid_argument("CirculantFactor1D: need >= 2 points");
  n_ = n_points;
  int base = next_fast_size(2 * (n_points - 1) + 2);
  for (int attempt = 0;; ++attempt) {
    m_ = next_fast_size(base << attempt);
    // first circulant row: C(0), C(h), ..., C((m/2)h), mirrored
    std::vector<std::complex<double>> row(m_);
    for (int k = 0; k < m_; ++k) {
      int lag = std::min(k, m_ - k);
      row[k] = cov(lag * mesh);
    }
    fft_inplace(row, FFTW_FORWARD);
    double max_eig = 0.0, min_eig = 0.0;
    for (auto& v : row) {
      max_eig = std::max(max_eig, v.real());
      min_eig = std::min(min_eig, v.real());
    }
    min_eig_ = min_eig;
    if (min_eig >= -rel_tol * max_eig || attempt == max_doublings) {
      approximate_ = min_eig < -rel_tol * max_eig;
      sqrt_eig_over_m_.resize(m_);
      for (int k = 0; k < m_; ++k)
        sqrt_eig_over_m_[k] = std::sqrt(std::max(row[k].real(), 0.0) / m_);
      return;
    }
  }
}

void CirculantFactor1D::sample_pair(PhiloxStream& rng, std::vector<double>& row_a,
                                    std::vector<double>& row_b) const {
  std::vector<std::complex<double>> freq(m_);
  for (int k = 0; k < m_; ++k) {
    double re = rng.normal();
    double im = rng.normal();
    freq[k] = std::complex<double>(re, im) * sqrt_eig_over_m_[k];
  }
  fft_inplace(freq, FFTW_BACKWARD);
  row_a.resize(n_);
  row_b.resize(n_);
  for (int i = 0; i < n_; ++i) {
    row_a[i] = freq[i].real();
    row_b[i] = freq[i].imag();
  }
}

std::vector<double> CirculantFactor1D::sample(PhiloxStream& rng) const {
  std::vector<double> a, b;
  sample_pair(rng, a, b);
  return a;
}

}  // namespace lrdfield

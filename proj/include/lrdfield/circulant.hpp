#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "lrdfield/rng.hpp"

namespace lrdfield {

// Aligned scratch for one embedding-sized transform; reusable across calls
// and threads (one instance per thread).
class FftScratch {
 public:
  explicit FftScratch(int n);
  ~FftScratch();
  FftScratch(const FftScratch&) = delete;
  FftScratch& operator=(const FftScratch&) = delete;
  std::complex<double>* data() { return data_; }
  int size() const { return n_; }

 private:
  std::complex<double>* data_ = nullptr;
  int n_ = 0;
};

// 1-D circulant embedding factor for a stationary covariance sampled at
// integer multiples of the mesh. Embedding size starts at the minimal even
// extension and doubles (up to `max_doublings`) while the spectrum has
// eigenvalues below -rel_tol * max; after that negative eigenvalues are
// clipped to zero and the factor is flagged approximate. The backward
// transform plan is built once and shared; executions on distinct scratch
// buffers are thread safe.
class CirculantFactor1D {
 public:
  CirculantFactor1D(const std::function<double(double)>& cov, int n_points, double mesh,
                    int max_doublings = 4, double rel_tol = 1e-8);
  ~CirculantFactor1D();
  CirculantFactor1D(const CirculantFactor1D&) = delete;
  CirculantFactor1D& operator=(const CirculantFactor1D&) = delete;

  int n_points() const { return n_; }
  int embedding_size() const { return m_; }
  bool approximate() const { return approximate_; }
  double min_eigenvalue() const { return min_eig_; }

  // Two independent rows per call (real and imaginary part of one complex
  // transform); scratch must match embedding_size().
  void sample_pair_into(PhiloxStream& rng, FftScratch& scratch, double* row_a,
                        double* row_b) const;

  // Convenience forms with internal scratch.
  void sample_pair(PhiloxStream& rng, std::vector<double>& row_a, std::vector<double>& row_b) const;
  std::vector<double> sample(PhiloxStream& rng) const;

 private:
  int n_ = 0;
  int m_ = 0;
  bool approximate_ = false;
  double min_eig_ = 0.0;
  std::vector<double> sqrt_eig_over_m_;  // sqrt(max(lambda,0)/m)
  void* plan_ = nullptr;                 // fftw_plan, backward in-place
};

// Smallest 5-smooth integer >= n (friendly FFT sizes).
int next_fast_size(int n);

}  // namespace lrdfield

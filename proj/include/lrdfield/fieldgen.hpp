#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "lrdfield/circulant.hpp"
#include "lrdfield/covariance.hpp"
#include "lrdfield/grid.hpp"
#include "lrdfield/subordinator.hpp"

namespace lrdfield {

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Centered Gaussian sample with covariance C on the grid, via d-dimensional
// circulant embedding. Exact in distribution when the embedding spectrum is
// nonnegative; otherwise clipped and flagged approximate.
FieldSample simulate_stationary(const CovarianceModel& model, const GridSpec& grid,
                                std::uint64_t seed, std::uint32_t replicate = 0);

// Exact fGn sample using the Kronecker structure of the product covariance:
// circulant rows along the longest axis, dense Toeplitz factors across the
// remaining axes.
FieldSample simulate_fgn(const std::vector<double>& hurst, const GridSpec& grid,
                         std::uint64_t seed, std::uint32_t replicate = 0);

// Dense-Cholesky sampler for a general covariance on an explicit point set
// (<= 4096 points), with diagonal jitter escalation 1e-12 -> 1e-8.
std::vector<double> simulate_nonstationary(
    const std::function<double(const std::vector<double>&, const std::vector<double>&)>& rho,
    const std::vector<std::vector<double>>& points, std::uint64_t seed,
    std::uint32_t replicate = 0);

enum class VolatilityKind { constant, levy_sqrt };

struct VolatilityLaw {
  VolatilityKind kind = VolatilityKind::constant;
  double param = 1.0;  // c for constant; u for levy_sqrt (xi^2 ~ Levy(0, u^2))

  static VolatilityLaw constant(double c) { return {VolatilityKind::constant, c}; }
  static VolatilityLaw levy_sqrt(double u) { return {VolatilityKind::levy_sqrt, u}; }

  // One xi draw for a replicate.
  double draw(std::uint64_t seed, std::uint32_t replicate) const;
};

// X(t) = xi * Y(t) with xi drawn once per replicate, independent of Y.
FieldSample simulate_random_volatility(const CovarianceModel& base, const VolatilityLaw& xi,
                                       const GridSpec& grid, std::uint64_t seed,
                                       std::uint32_t replicate = 0);

// Pointwise transform; signed_exp saturates to +-DBL_MAX with a counted flag
// instead of producing inf.
FieldSample subordinate(const Subordinator& f, FieldSample sample);

// Reusable fGn sampler: factors are built once, replicates stream through.
// excursion_count() avoids materializing the field and may run its row and
// column stages on several threads; output is thread-count independent.
class FgnKroneckerSampler {
 public:
  FgnKroneckerSampler(std::vector<double> hurst, const GridSpec& grid);

  FieldSample sample_field(std::uint64_t seed, std::uint32_t replicate) const;
  std::int64_t excursion_count(std::uint64_t seed, std::uint32_t replicate, double level,
                               int threads) const;

  const GridSpec& grid() const { return grid_; }

 private:
  void fill_rows(std::uint64_t seed, std::uint32_t replicate, std::vector<double>& buffer,
                 int threads) const;

  std::vector<double> hurst_;
  GridSpec grid_;
  int row_axis_ = 0;                                  // longest axis, circulant rows
  std::unique_ptr<CirculantFactor1D> row_factor_;
  std::vector<std::vector<double>> mix_factors_;      // lower-triangular, row-major, per other axis
  std::vector<int> other_axes_;
};

}  // namespace lrdfield

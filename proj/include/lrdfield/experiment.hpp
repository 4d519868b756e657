#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrdfield/covariance.hpp"
#include "lrdfield/fieldgen.hpp"
#include "lrdfield/grid.hpp"
#include "lrdfield/mathutil.hpp"
#include "lrdfield/normalizer.hpp"
#include "lrdfield/stats.hpp"
#include "lrdfield/subordinator.hpp"
#include "lrdfield/wiener_ito.hpp"

namespace lrdfield {

struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  CovarianceModel model;
  Subordinator subordinator;
  double level = 0.0;
  std::vector<GridSpec> windows;   // strictly increasing in volume
  int replicates = 1000;
  std::uint64_t seed = 1;
  NormalizationMethod normalization = NormalizationMethod::quadrature;
  int target_rank = 1;
  int threads = 1;

  // lemma28 inputs when normalization == lemma28
  double lemma28_kappa_value = 1.0;
  std::vector<double> lemma28_lambda;  // one value per window

  void validate() const;
};

struct WindowResult {
  int window_index = 0;
  double label = 0.0;           // representative size for scaling fits
  double volume = 0.0;
  double centering = 0.0;
  double scale = 0.0;
  std::vector<double> raw;           // per-replicate functional values
  std::vector<double> standardized;
  Moments std_moments;
  KsResult ks_normal;
  double raw_variance = 0.0;
};

struct ExperimentReport {
  std::string experiment_type;
  std::vector<WindowResult> windows;
  LineFit variance_fit;          // log raw variance vs log label
  double slope_target = 0.0;
  bool has_slope_target = false;

  // rank-m extras
  std::vector<double> sigma_ratio;   // sigma_{n,m+1}/sigma_{n,m} per window
  std::optional<KsResult> ks_vs_oracle;
  std::optional<double> oracle_skewness;
  std::optional<double> statistic_skewness;

  // volatility extras
  std::optional<KsResult> ks_uniform_half;

  bool growth_condition_warning = false;
  bool gate_passed = false;
  std::string gate_description;
};

// Rank-1 central limit experiment: standardized excursion volumes vs N(0,1)
// along a window ladder. Precondition: Hermite rank of (f, u) is 1.
ExperimentReport run_clt_experiment(const ExperimentConfig& config);

struct FgnExperimentConfig {
  std::vector<double> hurst;
  std::vector<double> gamma;     // empty -> auto from the Hurst vector
  std::vector<double> ladder;    // base sizes n; windows prod [0, n^{gamma_i}]
  double level = 0.0;
  int replicates = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Auto growth exponents gamma_i = (3-2H_i)/(3-2H_i - 1{2H_i>1}).
std::vector<double> fgn_auto_gamma(const std::vector<double>& hurst);

ExperimentReport run_fgn_experiment(const FgnExperimentConfig& config);

struct VolatilityExperimentConfig {
  CovarianceModel base;
  VolatilityLaw xi;
  double level = 1.0;
  std::vector<GridSpec> windows;
  int replicates = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Normalized excursion volumes of X = xi * Y; for the Levy volatility the
// limit law of Psi(u/xi) is Uniform[0, 1/2].
ExperimentReport run_random_volatility_experiment(const VolatilityExperimentConfig& config);

struct RankMExperimentConfig {
  CovarianceModel model;
  Subordinator subordinator;
  double level = 0.0;
  std::vector<GridSpec> windows;
  int replicates = 1000;
  std::uint64_t seed = 1;
  int target_rank = 2;
  int threads = 1;
  int oracle_draws = 10000;
  HermiteOracle::Config oracle;  // x range/grid; m is overridden by target_rank
};

// Non-central limit experiment: statistic sqrt(m!) (V - center)/(b_m sigma_{n,m})
// compared against the discretized Wiener-Ito oracle.
ExperimentReport run_rank_m_experiment(const RankMExperimentConfig& config);

// Spectral shape of the model near frequency 0, as the gamma exponents of an
// anisotropic product density (used to match a model with its oracle).
std::vector<double> model_spectral_gamma(const CovarianceModel& model);

}  // namespace lrdfield

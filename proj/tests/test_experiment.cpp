#include <doctest.h>

#include <cmath>

#include "lrdfield/excursion.hpp"
#include "lrdfield/experiment.hpp"
#include "lrdfield/hermite.hpp"
#include "lrdfield/stats.hpp"

using namespace lrdfield;

TEST_SUITE_BEGIN("experiment");

namespace {
ExperimentConfig small_clt_config() {
  ExperimentConfig cfg{CovarianceModel::power_law_iso(0.4, 1), Subordinator::identity()};
  cfg.level = 0.0;
  cfg.windows = {GridSpec::line(64), GridSpec::line(128)};
  cfg.replicates = 300;
  cfg.seed = 3;
  cfg.threads = 2;
  return cfg;
}
}  // namespace

TEST_CASE("clt experiment produces calibrated statistics") {
  ExperimentReport rep = run_clt_experiment(small_clt_config());
  REQUIRE(rep.windows.size() == 2);
  for (const auto& w : rep.windows) {
    CHECK(std::abs(w.std_moments.mean) < 0.25);
    CHECK(w.std_moments.variance == doctest::Approx(1.0).epsilon(0.35));
    CHECK(int(w.raw.size()) == 300);
  }
  CHECK(rep.has_slope_target);
  CHECK(rep.slope_target == doctest::Approx(1.6));
}

TEST_CASE("clt experiment is deterministic across thread counts") {
  ExperimentConfig cfg = small_clt_config();
  cfg.threads = 1;
  ExperimentReport a = run_clt_experiment(cfg);
  cfg.threads = 2;
  ExperimentReport b = run_clt_experiment(cfg);
  CHECK(a.windows[0].raw == b.windows[0].raw);
  CHECK(a.windows[1].raw == b.windows[1].raw);
}

TEST_CASE("rank precondition routes even subordinators away") {
  ExperimentConfig cfg = small_clt_config();
  cfg.subordinator = Subordinator::square();
  cfg.level = 4.0;
  CHECK_THROWS_AS(run_clt_experiment(cfg), precondition_error);
}

TEST_CASE("window ladder must grow") {
  ExperimentConfig cfg = small_clt_config();
  cfg.windows = {GridSpec::line(128), GridSpec::line(64)};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.windows = {GridSpec::line(64)};
  cfg.replicates = 50;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("centering matches the zeroth coefficient") {
  // uncentered functional mean ~ volume * a_0 within 3 standard errors
  ExperimentConfig cfg{CovarianceModel::power_law_iso(0.4, 1), Subordinator::signed_exp(2.1)};
  cfg.level = 1.0;
  cfg.windows = {GridSpec::line(128)};
  cfg.replicates = 400;
  cfg.seed = 5;
  cfg.threads = 2;
  ExperimentReport rep = run_clt_experiment(cfg);
  const auto& w = rep.windows[0];
  double mean_raw = 0.0;
  for (double v : w.raw) mean_raw += v;
  mean_raw /= double(w.raw.size());
  double sd = std::sqrt(sample_moments(w.raw).variance / double(w.raw.size()));
  CHECK(std::abs(mean_raw - w.centering) < 3.0 * sd);
}

TEST_CASE("empirical chaos orthogonality on simulated pairs") {
  // E[H_k(Y(t)) H_l(Y(s))] = delta_kl k! rho^k(t,s)
  auto model = CovarianceModel::exponential(0.3, 1);
  GridSpec g = GridSpec::line(8);
  const int t_idx = 1, s_idx = 5;
  const double rho = model.at1(double(s_idx - t_idx));
  const int reps = 20000;
  for (int k = 1; k <= 3; ++k)
    for (int l = k; l <= 3; ++l) {
      std::vector<double> prod(reps);
      for (int r = 0; r < reps; ++r) {
        FieldSample s = simulate_stationary(model, g, 1234 + k * 10 + l, std::uint32_t(r));
        prod[r] = hermite_eval(k, s.values[t_idx]) * hermite_eval(l, s.values[s_idx]);
      }
      Moments m = sample_moments(prod);
      double se = std::sqrt(m.variance / reps);
      double expected = (k == l) ? std::tgamma(double(k) + 1.0) * std::pow(rho, k) : 0.0;
      CHECK(std::abs(m.mean - expected) < 3.0 * se + 1e-12);
    }
}

TEST_CASE("fgn auto growth exponents") {
  auto g = fgn_auto_gamma({0.3, 0.8});
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(3.5));
  CHECK(fgn_auto_gamma({0.75})[0] == doctest::Approx(3.0));
  CHECK(fgn_auto_gamma({0.5})[0] == doctest::Approx(1.0));
}

TEST_CASE("fgn experiment: white-noise boundary case") {
  FgnExperimentConfig cfg;
  cfg.hurst = {0.5};
  cfg.ladder = {64, 128, 256};
  cfg.level = 0.0;
  cfg.replicates = 400;
  cfg.seed = 11;
  cfg.threads = 2;
  ExperimentReport rep = run_fgn_experiment(cfg);

  // H = 1/2 sits outside the first-chaos-domination regime: for iid fields
  // the chaos ratio never vanishes, so the growth condition warns...
  CHECK(rep.growth_condition_warning);
  // ...the variance exponent is still the classical one...
  CHECK(rep.slope_target == doctest::Approx(1.0));
  CHECK(std::abs(rep.variance_fit.slope - 1.0) < 0.25);
  // ...and the first-chaos scale understates the full indicator variance
  // Psi(1-Psi) by phi(0)^{-2}
  const auto& w = rep.windows.back();
  CHECK(w.std_moments.variance == doctest::Approx(0.25 / (normal_pdf(0.0) * normal_pdf(0.0)))
                                      .epsilon(0.15));

  // the classical CLT standardization is the one that passes
  double n_nodes = w.volume;
  std::vector<double> classical(w.raw.size());
  for (std::size_t i = 0; i < w.raw.size(); ++i)
    classical[i] = (w.raw[i] - 0.5 * n_nodes) / std::sqrt(0.25 * n_nodes);
  CHECK(ks_distance_normal(classical).distance < 0.1);
}

TEST_CASE("fgn experiment: long-range axis scales super-diffusively") {
  FgnExperimentConfig cfg;
  cfg.hurst = {0.75};
  cfg.gamma = {1.0};  // plain cubes, slope target 1.5
  cfg.ladder = {64, 128, 256, 512};
  cfg.level = 0.5;
  cfg.replicates = 400;
  cfg.seed = 13;
  cfg.threads = 2;
  ExperimentReport rep = run_fgn_experiment(cfg);
  CHECK(rep.slope_target == doctest::Approx(1.5));
  CHECK(std::abs(rep.variance_fit.slope - 1.5) < 0.3);
}

TEST_CASE("fgn growth-condition warning for exponents that break it") {
  FgnExperimentConfig cfg;
  cfg.hurst = {0.3};          // short-range axis
  cfg.gamma = {1.0};          // exponent delta+1-2H = 0.4 > 0: diverges
  cfg.ladder = {32, 64};
  cfg.replicates = 150;
  cfg.seed = 17;
  ExperimentReport rep = run_fgn_experiment(cfg);
  CHECK(rep.growth_condition_warning);
}

TEST_CASE("volatility experiment with constant xi concentrates at Psi(u/c)") {
  VolatilityExperimentConfig cfg{CovarianceModel::exponential(1.0, 1), VolatilityLaw::constant(2.0)};
  cfg.level = 1.0;
  cfg.windows = {GridSpec::line(256), GridSpec::line(1024)};
  cfg.replicates = 300;
  cfg.seed = 19;
  cfg.threads = 2;
  ExperimentReport rep = run_random_volatility_experiment(cfg);
  CHECK(rep.gate_passed);
  double spread_small = std::sqrt(rep.windows.front().std_moments.variance);
  double spread_large = std::sqrt(rep.windows.back().std_moments.variance);
  CHECK(spread_large < spread_small);
  CHECK(rep.windows.back().std_moments.mean ==
        doctest::Approx(normal_tail(0.5)).epsilon(0.05));
}

TEST_CASE("volatility experiment with Levy xi approaches Uniform[0,1/2]") {
  VolatilityExperimentConfig cfg{CovarianceModel::exponential(1.0, 1),
                                 VolatilityLaw::levy_sqrt(1.0)};
  cfg.level = 1.0;
  cfg.windows = {GridSpec::line(2048)};
  cfg.replicates = 500;
  cfg.seed = 23;
  cfg.threads = 2;
  ExperimentReport rep = run_random_volatility_experiment(cfg);
  REQUIRE(rep.ks_uniform_half.has_value());
  CHECK(rep.ks_uniform_half->distance < 0.08);
}

TEST_CASE("rank-m experiment: sigma ratios, oracle comparison, skewness") {
  RankMExperimentConfig cfg{CovarianceModel::power_law_iso(0.4, 1), Subordinator::square()};
  cfg.level = 4.0;
  cfg.windows = {GridSpec::line(256), GridSpec::line(512), GridSpec::line(1024)};
  cfg.replicates = 300;
  cfg.seed = 29;
  cfg.target_rank = 2;
  cfg.threads = 2;
  cfg.oracle_draws = 3000;
  cfg.oracle.x_min = 1e-3;
  cfg.oracle.uniform_to = 60.0;
  cfg.oracle.x_max = 1e3;
  cfg.oracle.cells_per_decade = 12;
  cfg.oracle.check_resolution = false;

  ExperimentReport rep = run_rank_m_experiment(cfg);
  REQUIRE(rep.sigma_ratio.size() == 3);
  CHECK(rep.sigma_ratio[1] < rep.sigma_ratio[0]);
  CHECK(rep.sigma_ratio[2] < rep.sigma_ratio[1]);
  REQUIRE(rep.ks_vs_oracle.has_value());
  CHECK(rep.ks_vs_oracle->distance < 0.25);
  CHECK(*rep.statistic_skewness > 0.3);  // non-Gaussian, right-skewed
  CHECK(*rep.oracle_skewness > 0.3);
}

TEST_CASE("rank-m experiment rejects weakly dependent models") {
  RankMExperimentConfig cfg{CovarianceModel::exponential(1.0, 1), Subordinator::square()};
  cfg.level = 4.0;
  cfg.windows = {GridSpec::line(64), GridSpec::line(128), GridSpec::line(256)};
  cfg.replicates = 150;
  cfg.seed = 31;
  cfg.target_rank = 2;
  CHECK_THROWS_AS(run_rank_m_experiment(cfg), precondition_error);
}

TEST_CASE("rank-m experiment checks the detected rank") {
  RankMExperimentConfig cfg{CovarianceModel::power_law_iso(0.4, 1), Subordinator::identity()};
  cfg.level = 0.0;
  cfg.windows = {GridSpec::line(128)};
  cfg.replicates = 150;
  cfg.target_rank = 2;
  CHECK_THROWS_AS(run_rank_m_experiment(cfg), precondition_error);
}

TEST_CASE("spectral gamma mapping") {
  CHECK(model_spectral_gamma(CovarianceModel::power_law_iso(0.4, 1))[0] == doctest::Approx(0.4));
  CHECK(model_spectral_gamma(CovarianceModel::fgn_product({0.8}))[0] == doctest::Approx(0.4));
  CHECK_THROWS_AS(model_spectral_gamma(CovarianceModel::fgn_product({0.25})),
                  std::invalid_argument);
}

TEST_SUITE_END();

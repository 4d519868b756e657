#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numeric>

#include "lrdfield/covariance.hpp"
#include "lrdfield/excursion.hpp"
#include "lrdfield/fieldgen.hpp"
#include "lrdfield/mathutil.hpp"
#include "lrdfield/stats.hpp"

using namespace lrdfield;

TEST_SUITE_BEGIN("fieldgen");

namespace {

// pooled lag covariance over replicates, all in-window pairs
double empirical_lag_cov(const CovarianceModel& model, const GridSpec& grid, int lag, int reps,
                         std::uint64_t seed) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (int r = 0; r < reps; ++r) {
    FieldSample s = simulate_stationary(model, grid, seed, std::uint32_t(r));
    int n = grid.nodes(0);
    for (int i = 0; i + lag < n; ++i) {
      sum += s.values[i] * s.values[i + lag];
      ++count;
    }
  }
  return sum / double(count);
}

}  // namespace

TEST_CASE("determinism: identical seed and replicate give identical samples") {
  auto model = CovarianceModel::power_law_iso(0.4, 1);
  GridSpec g = GridSpec::line(128);
  FieldSample a = simulate_stationary(model, g, 11, 3);
  FieldSample b = simulate_stationary(model, g, 11, 3);
  CHECK(a.values == b.values);
  FieldSample c = simulate_stationary(model, g, 11, 4);
  CHECK(a.values != c.values);

  GridSpec g2 = GridSpec::box2(12, 20);
  FieldSample fa = simulate_fgn({0.7, 0.6}, g2, 5, 0);
  FieldSample fb = simulate_fgn({0.7, 0.6}, g2, 5, 0);
  CHECK(fa.values == fb.values);
}

TEST_CASE("marginal variance of the power-law field") {
  auto model = CovarianceModel::power_law_iso(0.4, 1);
  GridSpec g = GridSpec::line(64);
  std::vector<double> first(10000);
  for (int r = 0; r < 10000; ++r)
    first[r] = simulate_stationary(model, g, 3, std::uint32_t(r)).values[0];
  Moments m = sample_moments(first);
  CHECK(m.variance == doctest::Approx(1.0).epsilon(0.05));
  CHECK(ks_distance_normal(first).p_value > 0.001);
}

TEST_CASE("exponential covariance at lag 1") {
  auto model = CovarianceModel::exponential(1.0, 1);
  double c1 = empirical_lag_cov(model, GridSpec::line(64), 1, 3000, 17);
  CHECK(c1 == doctest::Approx(std::exp(-1.0)).epsilon(0.14));  // within 0.05 absolute
  CHECK(std::abs(c1 - std::exp(-1.0)) < 0.05);
}

TEST_CASE("covariance fidelity within 3 standard errors") {
  auto model = CovarianceModel::power_law_iso(0.4, 1);
  GridSpec g = GridSpec::line(64);
  const int reps = 4000;
  for (int lag : {0, 1, 2, 5}) {
    std::vector<double> per_rep(reps, 0.0);
    for (int r = 0; r < reps; ++r) {
      FieldSample s = simulate_stationary(model, g, 23, std::uint32_t(r));
      double sum = 0.0;
      int n = g.nodes(0), cnt = 0;
      for (int i = 0; i + lag < n; ++i, ++cnt) sum += s.values[i] * s.values[i + lag];
      per_rep[r] = sum / cnt;
    }
    Moments m = sample_moments(per_rep);
    double se = std::sqrt(m.variance / reps);
    double expected = model.at1(double(lag));
    CHECK(std::abs(m.mean - expected) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("fGn lag covariances match rho_alpha/2") {
  // H = 1/2: white noise at integer lags
  {
    GridSpec g = GridSpec::line(128);
    double sum = 0.0;
    std::int64_t cnt = 0;
    for (int r = 0; r < 2000; ++r) {
      FieldSample s = simulate_fgn({0.5}, g, 31, std::uint32_t(r));
      for (int i = 0; i + 1 < 128; ++i) {
        sum += s.values[i] * s.values[i + 1];
        ++cnt;
      }
    }
    CHECK(std::abs(sum / double(cnt)) < 0.05);
  }
  // H = 0.75 at lag 1: rho_{3/4}(1)/2 = (2^{1.5}-2)/2
  {
    GridSpec g = GridSpec::line(128);
    double sum = 0.0;
    std::int64_t cnt = 0;
    for (int r = 0; r < 2000; ++r) {
      FieldSample s = simulate_fgn({0.75}, g, 37, std::uint32_t(r));
      for (int i = 0; i + 1 < 128; ++i) {
        sum += s.values[i] * s.values[i + 1];
        ++cnt;
      }
    }
    double expected = 0.5 * (std::pow(2.0, 1.5) - 2.0);
    CHECK(std::abs(sum / double(cnt) - expected) < 0.05);
  }
}

TEST_CASE("anisotropic fGn factorizes over axes") {
  GridSpec g = GridSpec::box2(24, 24);
  const int reps = 4000;
  double sum = 0.0;
  std::int64_t cnt = 0;
  for (int r = 0; r < reps; ++r) {
    FieldSample s = simulate_fgn({0.7, 0.6}, g, 41, std::uint32_t(r));
    int n0 = g.nodes(0), n1 = g.nodes(1);
    for (int i = 0; i + 1 < n0; i += 3)
      for (int j = 0; j + 1 < n1; j += 3) {
        sum += s.values[i * n1 + j] * s.values[(i + 1) * n1 + (j + 1)];
        ++cnt;
      }
  }
  double expected = 0.25 * rho_alpha(0.7, 1.0) * rho_alpha(0.6, 1.0);
  CHECK(std::abs(sum / double(cnt) - expected) < 0.05);
}

TEST_CASE("fused excursion count equals the two-step pipeline") {
  GridSpec g = GridSpec::box2(20, 40);
  FgnKroneckerSampler sampler({0.3, 0.8}, g);
  for (std::uint32_t rep : {0u, 1u, 5u}) {
    FieldSample s = sampler.sample_field(77, rep);
    double vol = excursion_volume(s, 0.3).value;
    std::int64_t fused1 = sampler.excursion_count(77, rep, 0.3, 1);
    std::int64_t fused2 = sampler.excursion_count(77, rep, 0.3, 2);
    CHECK(fused1 == fused2);  // thread count must not matter
    CHECK(double(fused1) * g.cell_volume() == doctest::Approx(vol));
  }
}

TEST_CASE("nonstationary sampler: independent and degenerate cases") {
  auto indep = [](const std::vector<double>& t, const std::vector<double>& s) {
    return (t == s) ? 1.0 : 0.0;
  };
  std::vector<std::vector<double>> pts{{0.0}, {1.0}, {2.0}};
  double cross = 0.0, var0 = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    auto v = simulate_nonstationary(indep, pts, 51, std::uint32_t(r));
    cross += v[0] * v[1];
    var0 += v[0] * v[0];
  }
  CHECK(std::abs(cross / reps) < 0.1);
  CHECK(var0 / reps == doctest::Approx(1.0).epsilon(0.06));

  auto constant = [](const std::vector<double>&, const std::vector<double>&) { return 1.0; };
  auto v = simulate_nonstationary(constant, pts, 52, 0);
  CHECK(std::abs(v[0] - v[1]) < 1e-10);
  CHECK(std::abs(v[1] - v[2]) < 1e-10);
}

TEST_CASE("nonstationary sampler matches the circulant backend in law") {
  auto model = CovarianceModel::exponential(1.0, 1);
  auto rho = [&](const std::vector<double>& t, const std::vector<double>& s) {
    return model.eval(t, s);
  };
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 16; ++i) pts.push_back({double(i)});
  GridSpec g = GridSpec::line(16);

  const int reps = 10000;
  std::vector<double> a(reps), b(reps);
  for (int r = 0; r < reps; ++r) {
    a[r] = simulate_nonstationary(rho, pts, 61, std::uint32_t(r))[0];
    b[r] = simulate_stationary(model, g, 62, std::uint32_t(r)).values[0];
  }
  CHECK(ks_two_sample(a, b).distance <= 0.02);
}

TEST_CASE("indefinite Gram matrix is rejected") {
  // not a covariance: negative off-diagonal beyond PSD range
  auto bad = [](const std::vector<double>& t, const std::vector<double>& s) {
    return (t == s) ? 1.0 : -0.9;
  };
  std::vector<std::vector<double>> pts{{0.0}, {1.0}, {2.0}, {3.0}};
  CHECK_THROWS_AS(simulate_nonstationary(bad, pts, 1, 0), model_error);
}

TEST_CASE("clipped embedding is flagged approximate and still samples") {
  // truncated constant covariance; its minimal circulant spectrum dips
  // negative no matter the padding
  CirculantFactor1D factor([](double v) { return std::abs(v) < 3.0 ? 1.0 : 0.0; }, 32, 1.0);
  CHECK(factor.approximate());
  PhiloxStream rng(1, 1);
  auto row = factor.sample(rng);
  CHECK(int(row.size()) == 32);
  for (double v : row) CHECK(std::isfinite(v));
}

TEST_CASE("random volatility") {
  auto model = CovarianceModel::exponential(1.0, 1);
  GridSpec g = GridSpec::line(64);

  // constant volatility 1 is the base field itself
  FieldSample base = simulate_stationary(model, g, 71, 0);
  FieldSample scaled = simulate_random_volatility(model, VolatilityLaw::constant(1.0), g, 71, 0);
  CHECK(base.values == scaled.values);

  // constant volatility c shifts the excursion probability to Psi(u/c)
  const double u = 1.0, c = 2.0;
  const int reps = 2000;
  double frac = 0.0;
  for (int r = 0; r < reps; ++r) {
    FieldSample s = simulate_random_volatility(model, VolatilityLaw::constant(c), g, 73,
                                               std::uint32_t(r));
    frac += excursion_volume(s, u).value / s.grid.window_volume();
  }
  frac /= reps;
  CHECK(frac == doctest::Approx(normal_tail(u / c)).epsilon(0.05));

  // Levy-volatility draws are finite and positive
  VolatilityLaw levy = VolatilityLaw::levy_sqrt(1.0);
  for (int r = 0; r < 100000; ++r) {
    double xi = levy.draw(79, std::uint32_t(r));
    CHECK(xi > 0.0);
    CHECK(std::isfinite(xi));
  }
}

TEST_CASE("subordination transforms pointwise and saturates overflow") {
  GridSpec g = GridSpec::line(8);
  FieldSample s;
  s.grid = g;
  s.values = {0.0, 1.0, -1.0, 2.0, 0.5, -0.5, 3.0, -3.0};

  FieldSample ident = subordinate(Subordinator::identity(), s);
  CHECK(ident.values == s.values);

  FieldSample quad = subordinate(Subordinator::quadratic(1.0), s);
  CHECK(quad.values[0] == doctest::Approx(-1.0));

  FieldSample big = s;
  big.values[3] = 60.0;  // exp(60^2/4) overflows
  FieldSample sat = subordinate(Subordinator::signed_exp(2.0), big);
  CHECK(sat.saturation_count == 1);
  CHECK(sat.values[3] == std::numeric_limits<double>::max());
}

TEST_CASE("grid validation and binary dump round trip") {
  CHECK_THROWS(GridSpec::line(1.0, 1.0));  // single node
  GridSpec g = GridSpec::box2(6, 4, 1.0, 0.5);
  CHECK(g.nodes(0) == 6);
  CHECK(g.nodes(1) == 8);
  CHECK(g.window_volume() == doctest::Approx(6.0 * 8.0 * 0.5));

  FieldSample s = simulate_fgn({0.6, 0.7}, g, 91, 2);
  std::string path = "dump_test.lrdf";
  write_field_dump(s, path);
  FieldSample back = read_field_dump(path);
  CHECK(back.grid.dim == 2);
  CHECK(back.grid.nodes(0) == 6);
  CHECK(back.grid.nodes(1) == 8);
  CHECK(back.grid.mesh[1] == doctest::Approx(0.5));
  CHECK(back.values == s.values);
  std::remove(path.c_str());
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>

#include "lrdfield/hermite.hpp"
#include "lrdfield/mathutil.hpp"

using namespace lrdfield;

TEST_SUITE_BEGIN("hermite");

TEST_CASE("recurrence values") {
  CHECK(hermite_eval(0, 3.7) == 1.0);
  CHECK(hermite_eval(1, -2.5) == -2.5);
  CHECK(hermite_eval(2, 2.0) == 3.0);     // x^2 - 1
  CHECK(hermite_eval(3, 1.0) == -2.0);    // x^3 - 3x
}

TEST_CASE("recurrence matches explicit polynomials up to k = 4") {
  auto h2 = [](double x) { return x * x - 1.0; };
  auto h3 = [](double x) { return x * x * x - 3.0 * x; };
  auto h4 = [](double x) { return x * x * x * x - 6.0 * x * x + 3.0; };
  for (double x : {-2.0, 0.0, 1.0, 3.0}) {
    CHECK(hermite_eval(0, x) == 1.0);
    CHECK(hermite_eval(1, x) == x);
    CHECK(hermite_eval(2, x) == h2(x));
    CHECK(hermite_eval(3, x) == h3(x));
    CHECK(hermite_eval(4, x) == h4(x));
  }
}

TEST_CASE("degree cap") {
  CHECK_THROWS_AS(hermite_eval(61, 1.0), std::out_of_range);
  CHECK_THROWS_AS(hermite_eval(-1, 1.0), std::invalid_argument);
  CHECK(std::isfinite(hermite_eval(60, 8.0)));
}

TEST_CASE("orthogonality under the Gaussian weight") {
  for (int k = 0; k <= 10; ++k)
    for (int l = 0; l <= k; ++l) {
      double expected = (k == l) ? std::tgamma(double(k) + 1.0) : 0.0;
      CHECK(std::abs(hermite_inner_product(k, l) - expected) < 1e-8);
    }
}

TEST_CASE("indicator coefficients, closed forms") {
  Subordinator id = Subordinator::identity();
  CHECK(hermite_coefficient(id, 0.0, 1.0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double u : {-1.0, 0.0, 0.5, 2.0})
    CHECK(std::abs(hermite_coefficient(id, u, 1.0, 1) - normal_pdf(u)) < 1e-10);

  // sigma rescaling goes through f^-(u)/sigma
  CHECK(hermite_coefficient(id, 1.0, 2.0, 0) == doctest::Approx(normal_tail(0.5)).epsilon(1e-12));
}

TEST_CASE("signed exponential coefficient matches the closed form") {
  double beta = 2.1;
  Subordinator f = Subordinator::signed_exp(beta);
  for (double u : {0.5, 1.0}) {
    double expected = kInvSqrt2Pi * std::pow(1.0 + u, -0.5 * beta * beta);
    CHECK(std::abs(hermite_coefficient(f, u, 1.0, 1) - expected) < 1e-8);
  }
}

TEST_CASE("even subordinators kill the first chaos") {
  Subordinator sq = Subordinator::square();
  for (double u : {-3.0, 0.2, 1.0, 4.0})
    CHECK(std::abs(hermite_coefficient(sq, u, 1.0, 1)) < 1e-12);
  for (int k : {1, 3, 5}) {
    CHECK(std::abs(hermite_coefficient(sq, 2.0, 1.0, k)) < 1e-10);
    CHECK(std::abs(hermite_coefficient(Subordinator::two_branch(0.8), 0.5, 1.0, k)) < 1e-10);
  }
}

TEST_CASE("quadrature path agrees with antiderivative identities") {
  // square at u=4: a_2 = sqrt(2) * H_1(2) phi(2) = 2 sqrt(2) phi(2)
  Subordinator sq = Subordinator::square();
  double expected = 2.0 * kSqrt2 * normal_pdf(2.0);
  CHECK(std::abs(hermite_coefficient(sq, 4.0, 1.0, 2) - expected) < 1e-9);

  // quadratic at a=1, u=1: region (-inf, x-] u [x+, inf) with
  // x^2 + x - 2 >= 0 -> x- = -2, x+ = 1
  Subordinator q = Subordinator::quadratic(1.0);
  double a0_expected = normal_cdf(-2.0) + normal_tail(1.0);
  CHECK(std::abs(hermite_coefficient(q, 1.0, 1.0, 0) - a0_expected) < 1e-10);
  double a1_expected = normal_pdf(1.0) - normal_pdf(-2.0);  // H_0 phi differences
  CHECK(std::abs(hermite_coefficient(q, 1.0, 1.0, 1) - a1_expected) < 1e-9);
}

TEST_CASE("Parseval partial sums climb monotonically toward a0") {
  // indicator coefficients carry k^{-3/2} energy tails, so the defect at
  // K = 40 sits near 0.02 and shrinks with K; it cannot reach 1e-4 at any
  // K the recurrence supports
  Subordinator id = Subordinator::identity();
  for (double u : {0.0, 0.7}) {
    HermiteProfile p = hermite_profile(id, u, 1.0, 40);
    auto sums = p.energy_partial_sums();
    double a0 = p.coefficients[0];
    double prev = 0.0;
    for (double s : sums) {
      CHECK(s >= prev - 1e-15);
      CHECK(s <= a0 + 1e-12);
      prev = s;
    }
    double defect_40 = a0 - sums.back();
    double defect_10 = a0 - sums[10];
    CHECK(defect_40 > 0.0);
    CHECK(defect_40 < 0.03);
    CHECK(defect_40 < defect_10);
  }
}

TEST_CASE("Hermite rank detection") {
  CHECK(hermite_rank(Subordinator::identity(), 0.5, 1.0).rank == 1);
  CHECK(hermite_rank(Subordinator::square(), 4.0, 1.0).rank == 2);
  CHECK(hermite_rank(Subordinator::cubic(0.5), 1.0, 1.0).rank == 1);

  // square below any level covers the whole line: no rank detected
  RankResult r = hermite_rank(Subordinator::square(), -1.0, 1.0);
  CHECK_FALSE(r.detected);
}

TEST_CASE("two-branch subordinator tuned to rank 4") {
  // pick u = a = 0.5 and solve b phi(b) = a phi(a) for b > 1, then c = u*b;
  // the second-chaos projection 2(a phi(a) - b phi(b)) vanishes and the
  // fourth stays away from zero
  const double a = 0.5;
  double target = a * normal_pdf(a);
  double lo = 1.0, hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mid * normal_pdf(mid) > target ? lo : hi) = mid;
  }
  double b = 0.5 * (lo + hi);
  Subordinator f = Subordinator::two_branch(a * b);
  CHECK(std::abs(hermite_coefficient(f, a, 1.0, 2)) < 1e-10);
  CHECK(std::abs(hermite_coefficient(f, a, 1.0, 4)) > 1e-3);
  CHECK(hermite_rank(f, a, 1.0).rank == 4);
}

TEST_CASE("generalized inverse by bisection") {
  Subordinator c = Subordinator::cubic(2.0);
  double u = 3.0;
  double x = c.generalized_inverse(u);
  CHECK(std::abs(c(x) - u) < 1e-9);
  CHECK(std::abs(Subordinator::identity().generalized_inverse(-5.0) + 5.0) < 1e-11);
  CHECK(std::abs(Subordinator::signed_exp(2.0).generalized_inverse(1.0) -
                 2.0 * std::sqrt(std::log(2.0))) < 1e-9);
}

TEST_SUITE_END();

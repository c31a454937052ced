#include <doctest.h>

#include <cmath>
#include <vector>

#include "cspg/chebyshev.hpp"
#include "cspg/verify.hpp"

using namespace cspg;

TEST_CASE("univariate Chebyshev values") {
  CHECK(cheb1d(0, 0.37) == doctest::Approx(1.0));
  CHECK(cheb1d(1, 1.0) == doctest::Approx(std::sqrt(2.0)));
  // sqrt(2) cos(2 * pi/3) = -sqrt(2)/2
  CHECK(cheb1d(2, 0.5) == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(cheb1d(3, 1.0000001), std::domain_error);
}

TEST_CASE("recurrence evaluation matches the trigonometric formula") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int j = static_cast<int>(rng.next_u64() % 51);
    const double t = 2.0 * rng.next_uniform() - 1.0;
    const double trig = (j == 0) ? 1.0 : std::sqrt(2.0) * std::cos(j * std::acos(t));
    CHECK(std::abs(cheb1d(j, t) - trig) <= 1e-13);
  }
}

TEST_CASE("tensor polynomial: empty index and explicit product") {
  ParamPoint y{0.3, -0.7, 0.1};
  CHECK(tensor_cheb(MultiIndex{}, y) == doctest::Approx(1.0));
  // nu = (1,0,2) at y = (1, anything, 0.5): sqrt2 * (-sqrt2/2) = -1
  MultiIndex nu(std::vector<int>{1, 0, 2});
  ParamPoint y2{1.0, 0.42, 0.5};
  CHECK(tensor_cheb(nu, y2) == doctest::Approx(-1.0).epsilon(1e-12));
  // support exceeding the point's dimension is rejected
  ParamPoint y_short{1.0};
  CHECK_THROWS_AS(tensor_cheb(nu, y_short), std::invalid_argument);
}

TEST_CASE("tensor polynomial is bounded by 2^{order0/2}") {
  RngStream rng(12, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> dense(5, 0);
    for (auto& e : dense) e = static_cast<int>(rng.next_u64() % 4);
    MultiIndex nu(dense);
    ParamPoint y = sample_measure(rng, 5);
    CHECK(std::abs(tensor_cheb(nu, y)) <=
          std::pow(2.0, nu.order0() / 2.0) * (1.0 + 1e-12));
  }
}

TEST_CASE("quadrature rule basics") {
  auto r1 = quad_rule(1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(1.0));

  auto r8 = quad_rule(8);
  double wsum = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    wsum += r8.weights[k];
    CHECK(r8.nodes[k] > -1.0);
    CHECK(r8.nodes[k] < 1.0);
    if (k > 0) CHECK(r8.nodes[k] < r8.nodes[k - 1]);
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadrature orthonormality of the normalized polynomials") {
  auto rule = quad_rule(32);
  for (int j = 0; j <= 20; ++j) {
    for (int k = 0; k <= 20; ++k) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        acc += rule.weights[q] * cheb1d(j, rule.nodes[q]) * cheb1d(k, rule.nodes[q]);
      CHECK(std::abs(acc - (j == k ? 1.0 : 0.0)) <= 1e-12);
    }
  }
}

TEST_CASE("second moment of the arcsine measure via quadrature") {
  auto rule = quad_rule(4);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    acc += rule.weights[q] * rule.nodes[q] * rule.nodes[q];
  CHECK(std::abs(acc - 0.5) <= 1e-14);
}

TEST_CASE("sampled first and second moments of T1") {
  RngStream rng(13, 0);
  const int n = 100000;
  double sum1 = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    ParamPoint y = sample_measure(rng, 1);
    const double t1 = cheb1d(1, y[0]);
    sum1 += t1;
    sum2 += t1 * t1;
  }
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(sum1 / n) <= 3.0 * sigma);
  CHECK(std::abs(sum2 / n - 1.0) <= 3.0 * sigma * std::sqrt(2.0));
}

TEST_CASE("reference coefficient projects onto the matching basis element") {
  MultiIndex mu(std::vector<int>{2, 1});
  auto F = [&mu](const ParamPoint& y) { return tensor_cheb(mu, y); };
  CHECK(std::abs(reference_coefficient(F, mu, 8, 2) - 1.0) <= 1e-12);
  MultiIndex other(std::vector<int>{1, 1});
  CHECK(std::abs(reference_coefficient(F, other, 8, 2)) <= 1e-12);
  CHECK(std::abs(reference_coefficient(F, MultiIndex{}, 8, 2)) <= 1e-12);
}

TEST_CASE("reference coefficients of an analytic function self-converge") {
  auto F = [](const ParamPoint& y) { return 1.0 / (2.0 + y[0]); };
  for (int k = 0; k <= 4; ++k) {
    MultiIndex nu;
    if (k > 0) nu.set(1, k);
    const double coarse = reference_coefficient(F, nu, 64, 1);
    const double fine = reference_coefficient(F, nu, 128, 1);
    CHECK(std::abs(coarse - fine) <= 1e-12);
  }
}

TEST_CASE("reference coefficient enforces the evaluation budget") {
  auto F = [](const ParamPoint&) { return 1.0; };
  CHECK_THROWS_AS(reference_coefficient(F, MultiIndex{}, 100, 5), std::runtime_error);
}

TEST_CASE("counter-based streams are reproducible and decorrelated") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal_cross = true;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    if (va != c.next_u64()) all_equal_cross = false;
  }
  CHECK_FALSE(all_equal_cross);
}

TEST_CASE("chebyshev verify suite passes end to end") {
  auto report = run_verify_suite("chebyshev", 2026);
  for (const auto& chk : report.checks) {
    INFO(chk.name, ": ", chk.detail);
    CHECK(chk.pass);
  }
}

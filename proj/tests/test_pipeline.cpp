#include <doctest.h>

#include <cmath>
#include <vector>

#include "cspg/io.hpp"
#include "cspg/pde.hpp"
#include "cspg/pipeline.hpp"
#include "cspg/verify.hpp"

using namespace cspg;

namespace {

DiffusionModel constant_model() {
  DiffusionModel m;
  m.abar = [](double) { return 2.0; };
  m.rhs = [](double) { return 1.0; };
  m.functional.kind = Functional::Kind::PointEval;
  m.functional.x0 = 0.5;
  m.r = 1.9;
  m.R = 2.1;
  m.kappa = 0.5;
  return m;
}

} // namespace

TEST_CASE("experiment planning at the smallest budget") {
  auto model = default_model(8);
  auto plan = plan_experiment(2.0, WeightParams::polynomial(1.2, 1.0), 1.0, 1e-3, 7,
                              model);
  CHECK(plan.set.size() == 1);
  CHECK(plan.m >= 1);
  const double expected_m = std::ceil(2.0 * std::pow(std::log(2.0), 3.0) * std::log(2.0));
  CHECK(plan.m == static_cast<int>(expected_m));
  CHECK(plan.sampling_dim >= plan.disc.B);
}

TEST_CASE("planned set size stays under the closed-form polynomial bound") {
  auto model = default_model(8);
  const double c = 1.5, alpha = 1.0;
  for (double s : {32.0, 128.0, 512.0}) {
    auto plan = plan_experiment(s, WeightParams::polynomial(c, alpha), 1.0, 1e-3, 7,
                                model);
    if (corollary_polynomial_applicable(c, alpha, s))
      CHECK(static_cast<double>(plan.set.size()) <=
            corollary_bound_polynomial(c, alpha, s) * (1.0 + 1e-9));
  }
}

TEST_CASE("exponential weights lose the compressive regime") {
  auto model = default_model(8);
  auto plan =
      plan_experiment(64.0, WeightParams::exponential(2.0), 1.0, 1e-3, 7, model);
  CHECK(plan.m >= static_cast<int>(plan.set.size()));
  CHECK_FALSE(plan.compressive);
}

TEST_CASE("constant functional is recovered on the zero-order term only") {
  auto model = constant_model();
  auto plan = plan_experiment(16.0, WeightParams::polynomial(1.3, 1.0), 1.0, 1e-4, 11,
                              model);
  auto surrogate = run_cspg(model, plan);
  REQUIRE(surrogate.coeffs.size() == plan.set.size());
  // F(y) = u(0.5) is parameter-independent: only T_0 carries weight
  FemDiscretization ref = plan.disc;
  auto u0 = fem_solve(model, ParamPoint(plan.sampling_dim, 0.0), ref);
  const double f0 = eval_functional(model, u0);
  // the residual radius tau = 2 sqrt(m) epsilon lets the objective shrink the
  // lead coefficient by up to tau / sqrt(m) = 2 epsilon
  CHECK(std::abs(surrogate.coeffs[0] - f0) <= 3e-4);
  for (std::size_t j = 1; j < surrogate.coeffs.size(); ++j)
    CHECK(std::abs(surrogate.coeffs[j]) <= 1e-6);
}

TEST_CASE("planted weighted-sparse polynomials are recovered exactly") {
  auto inst = make_planted_instance(100, 10.0, 404);
  int hits = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const double err = planted_recovery_error(inst, 70, 1000 + trial);
    if (err <= 1e-6) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("surrogate evaluation matches the coefficient expansion") {
  auto model = default_model(8);
  auto plan = plan_experiment(16.0, WeightParams::polynomial(1.3, 1.0), 1.0, 1e-3, 13,
                              model);
  auto surrogate = run_cspg(model, plan);
  RngStream rng(55, 0);
  for (int trial = 0; trial < 20; ++trial) {
    ParamPoint y = sample_measure(rng, plan.sampling_dim);
    double direct = 0.0;
    for (std::size_t j = 0; j < plan.set.size(); ++j)
      direct += surrogate.coeffs[j] * tensor_cheb(plan.set.indices[j], y);
    CHECK(surrogate.evaluate(y) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::abs(surrogate.evaluate(y)) <=
          surrogate.linf_coefficient_bound() * (1.0 + 1e-12));
  }
}

TEST_CASE("error estimation against a self-consistent constant model") {
  auto model = constant_model();
  auto plan = plan_experiment(8.0, WeightParams::polynomial(1.3, 1.0), 1.0, 1e-4, 17,
                              model);
  auto surrogate = run_cspg(model, plan);
  auto report = estimate_errors(surrogate, model, 50, 99, plan.disc.h / 8.0);
  // constant functional: FEM bias plus the 2-epsilon coefficient shrinkage
  CHECK(report.l2 <= 1e-3);
  CHECK(report.linf <= 1e-3);
  CHECK(report.linf <= report.linf_bound + 1e-12);
  CHECK(report.n_test == 50);
  // reference mesh must be at least 4x finer
  CHECK_THROWS_AS(estimate_errors(surrogate, model, 50, 99, plan.disc.h / 2.0),
                  std::invalid_argument);
}

TEST_CASE("doubling the test-sample count shrinks the standard error") {
  auto model = default_model(8);
  auto plan = plan_experiment(16.0, WeightParams::polynomial(1.3, 1.0), 1.0, 1e-3, 19,
                              model);
  auto surrogate = run_cspg(model, plan);
  auto small = estimate_errors(surrogate, model, 100, 7, plan.disc.h / 8.0);
  auto big = estimate_errors(surrogate, model, 400, 7, plan.disc.h / 8.0);
  CHECK(big.l2_se < small.l2_se);
  // estimates agree within a few standard errors
  CHECK(std::abs(big.l2 - small.l2) <= 4.0 * (big.l2_se + small.l2_se) + 1e-12);
}

TEST_CASE("determinism across worker counts") {
  auto model = default_model(8);
  auto plan = plan_experiment(16.0, WeightParams::polynomial(1.3, 1.0), 1.0, 1e-3, 23,
                              model);
  auto serial = run_cspg(model, plan, RecoveryMethod::Bpdn, 1);
  auto parallel = run_cspg(model, plan, RecoveryMethod::Bpdn, 4);
  REQUIRE(serial.coeffs.size() == parallel.coeffs.size());
  for (std::size_t j = 0; j < serial.coeffs.size(); ++j)
    CHECK(serial.coeffs[j] == parallel.coeffs[j]); // bitwise
  CHECK(surrogate_hash(serial) == surrogate_hash(parallel));
}

TEST_CASE("reference coefficients of a constant functional") {
  auto model = constant_model();
  auto set = enumerate_index_set(32.0, WeightParams::polynomial(1.3, 1.0));
  auto ref = reference_coefficients_lowdim(model, set, 8, 1.0 / 128);
  REQUIRE(ref.values.size() == set.size());
  FemDiscretization disc;
  disc.h = 1.0 / 128;
  disc.B = 0;
  auto u0 = fem_solve(model, {}, disc);
  CHECK(std::abs(ref.values[0] - eval_functional(model, u0)) <= 1e-10);
  for (std::size_t j = 1; j < ref.values.size(); ++j)
    CHECK(std::abs(ref.values[j]) <= 1e-10);
}

TEST_CASE("coefficient-space error equals function-space error on the set span") {
  // surrogate vs reference coefficients: Parseval on the finite index set
  auto model = default_model(6);
  auto plan = plan_experiment(32.0, WeightParams::polynomial(1.3, 1.2), 2.0, 1e-3, 29,
                              model);
  auto surrogate = run_cspg(model, plan);
  auto ref = reference_coefficients_lowdim(model, plan.set, 16, plan.disc.h / 8.0);
  double coeff_err_sq = 0.0;
  for (std::size_t j = 0; j < ref.values.size(); ++j) {
    const double d = surrogate.coeffs[j] - ref.values[j];
    coeff_err_sq += d * d;
  }
  // quadrature L2 distance between the two expansions over the same set
  const int dims = plan.set.active_dim();
  auto F = [&](const ParamPoint& y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ref.values.size(); ++j)
      acc += (surrogate.coeffs[j] - ref.values[j]) *
             tensor_cheb(plan.set.indices[j], y);
    return acc * acc;
  };
  double l2_sq = reference_coefficient(
      [&F](const ParamPoint& y) { return F(y); }, MultiIndex{}, 16, dims);
  CHECK(std::sqrt(l2_sq) == doctest::Approx(std::sqrt(coeff_err_sq)).epsilon(1e-8));
}

TEST_CASE("admissibility of polydisc radii") {
  auto model = default_model(32);
  // constant radii 1: admissible whenever delta <= 1 - kappa
  CHECK(check_delta_admissible(std::vector<double>(32, 1.0), model, 0.25));
  CHECK(check_delta_admissible(std::vector<double>(32, 1.0), model, 0.5));

  // scaled to the boundary: flips across it
  double beta_sum = 0.0;
  for (int j = 1; j <= 32; ++j) beta_sum += beta0_upper(model, j);
  const double delta = 0.25;
  const double at_boundary = (1.0 - delta) / beta_sum;
  CHECK(check_delta_admissible(std::vector<double>(32, at_boundary * 0.999), model,
                               delta));
  CHECK_FALSE(check_delta_admissible(std::vector<double>(32, at_boundary * 1.001),
                                     model, delta));

  // slightly enlarged radii remain admissible for small enough enlargement
  CHECK(check_delta_admissible(std::vector<double>(32, 1.0 + 1e-3), model, 0.25));
}

TEST_CASE("log-log rate fitting") {
  std::vector<std::pair<double, double>> exact;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) exact.push_back({x, 1.0 / (x * x)});
  auto fit = rate_fit(exact);
  CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-10));

  RngStream rng(66, 0);
  std::vector<std::pair<double, double>> noisy;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
    noisy.push_back({x, 3.0 * std::pow(x, -0.5) * (1.0 + 0.01 * (2.0 * rng.next_uniform() - 1.0))});
  auto nfit = rate_fit(noisy);
  CHECK(nfit.exponent == doctest::Approx(-0.5).epsilon(0.1));

  CHECK_THROWS_AS(rate_fit({{1.0, 1.0}, {2.0, 0.5}}), std::invalid_argument);
}

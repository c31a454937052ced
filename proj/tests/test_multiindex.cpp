#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cspg/chebyshev.hpp"
#include "cspg/multiindex.hpp"

using namespace cspg;

namespace {

// Brute-force membership scan over a dense exponent box, used as the
// enumeration oracle at small dimension.
std::vector<MultiIndex> brute_force_set(double s, const WeightParams& w, int dims,
                                        int max_exp) {
  std::vector<MultiIndex> out;
  std::vector<int> nu(dims, 0);
  while (true) {
    MultiIndex idx(nu);
    double lw = log2_omega(idx, w);
    if (2.0 * lw <= std::log2(s / 2.0) + 1e-12) out.push_back(idx);
    int k = 0;
    while (k < dims && ++nu[k] > max_exp) nu[k++] = 0;
    if (k == dims) break;
  }
  std::sort(out.begin(), out.end(), MultiIndex::graded_less);
  return out;
}

} // namespace

TEST_CASE("multi-index basics") {
  MultiIndex z;
  CHECK(z.is_zero());
  CHECK(z.order0() == 0);
  CHECK(z.order1() == 0);

  MultiIndex a(std::vector<int>{1, 0, 2});
  CHECK(a.order0() == 2);
  CHECK(a.order1() == 3);
  CHECK(a.max_dim() == 3);
  CHECK(a.get(1) == 1);
  CHECK(a.get(2) == 0);
  CHECK(a.get(3) == 2);

  // zeros dropped from storage
  MultiIndex b(std::vector<int>{0, 0, 0});
  CHECK(b.is_zero());
  CHECK(a != b);
  CHECK(MultiIndex(std::vector<int>{1, 0, 2}) == a);
}

TEST_CASE("graded order: degree first, then lexicographic") {
  MultiIndex e1(std::vector<int>{1});
  MultiIndex e2(std::vector<int>{0, 1});
  MultiIndex d2(std::vector<int>{2});
  CHECK(MultiIndex::graded_less(MultiIndex{}, e1));
  CHECK(MultiIndex::graded_less(e1, e2)); // same degree, lexicographic prefix
  CHECK(MultiIndex::graded_less(e2, d2)); // degree 1 before degree 2
  CHECK_FALSE(MultiIndex::graded_less(e1, e1));
}

TEST_CASE("omega on the zero index is 1") {
  CHECK(omega(MultiIndex{}, WeightParams::constant(1.0)) == doctest::Approx(1.0));
  CHECK(omega(MultiIndex{}, WeightParams::polynomial(2.0, 3.0)) == doctest::Approx(1.0));
}

TEST_CASE("omega of a single second-order entry with unit weights is theta") {
  MultiIndex nu(std::vector<int>{2});
  CHECK(omega(nu, WeightParams::constant(1.0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("omega closed-form product: nu=(1,0,1), v_j=j, theta=sqrt2") {
  MultiIndex nu(std::vector<int>{1, 0, 1});
  // theta^2 * v_1^1 * v_3^1 = 2 * 1 * 3
  CHECK(omega(nu, WeightParams::polynomial(1.0, 1.0)) == doctest::Approx(6.0));
}

TEST_CASE("omega dominates the tensor polynomial sup-norm 2^{order0/2}") {
  RngStream rng(77, 0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> dense(6, 0);
    for (auto& e : dense) e = static_cast<int>(rng.next_u64() % 4);
    MultiIndex nu(dense);
    const double w = omega(nu, WeightParams::polynomial(1.0 + rng.next_uniform(),
                                                        2.0 * rng.next_uniform()));
    CHECK(w >= std::pow(2.0, nu.order0() / 2.0) * (1.0 - 1e-12));
  }
}

TEST_CASE("log-space membership agrees with direct weight comparison") {
  RngStream rng(78, 0);
  auto w = WeightParams::polynomial(1.2, 0.8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> dense(4, 0);
    for (auto& e : dense) e = static_cast<int>(rng.next_u64() % 3);
    MultiIndex nu(dense);
    const double direct = omega(nu, w);
    const double via_log = std::exp2(log2_omega(nu, w));
    CHECK(direct == doctest::Approx(via_log).epsilon(1e-12));
  }
}

TEST_CASE("enumerate: s=40, explicit v=(2)") {
  auto set = enumerate_index_set(40.0, WeightParams::explicit_list({2.0}));
  REQUIRE(set.size() == 2);
  CHECK(set.indices[0].is_zero());
  CHECK(set.indices[1] == MultiIndex(std::vector<int>{1}));
  // oracle: brute-force scan of nu_1 = 0..5
  auto oracle = brute_force_set(40.0, set.weights, 1, 5);
  CHECK(oracle.size() == set.size());
}

TEST_CASE("enumerate: s=2 leaves only the zero index") {
  auto set = enumerate_index_set(2.0, WeightParams::polynomial(1.5, 1.0));
  REQUIRE(set.size() == 1);
  CHECK(set.indices[0].is_zero());
}

TEST_CASE("enumerate: s=40, explicit v=(2,2)") {
  auto set = enumerate_index_set(40.0, WeightParams::explicit_list({2.0, 2.0}));
  REQUIRE(set.size() == 3);
  CHECK(set.indices[0].is_zero());
  CHECK(set.indices[1] == MultiIndex(std::vector<int>{1}));
  CHECK(set.indices[2] == MultiIndex(std::vector<int>{0, 1}));
  auto oracle = brute_force_set(40.0, set.weights, 2, 5);
  CHECK(oracle.size() == set.size());
}

TEST_CASE("enumerate matches a brute-force oracle on random small configurations") {
  RngStream rng(79, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const double s = 2.0 + 120.0 * rng.next_uniform();
    const double v1 = 1.3 + rng.next_uniform();
    const double v2 = v1 + rng.next_uniform();
    const double v3 = v2 + rng.next_uniform();
    auto w = WeightParams::explicit_list({v1, v2, v3});
    auto set = enumerate_index_set(s, w);
    auto oracle = brute_force_set(s, w, 3, 14);
    REQUIRE(set.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(set.indices[i] == oracle[i]);
  }
}

TEST_CASE("enumerate is monotone in the budget") {
  auto w = WeightParams::polynomial(1.2, 1.0);
  auto small = enumerate_index_set(24.0, w);
  auto large = enumerate_index_set(96.0, w);
  CHECK(small.size() <= large.size());
  for (const auto& nu : small.indices) {
    bool found = false;
    for (const auto& mu : large.indices)
      if (nu == mu) { found = true; break; }
    CHECK(found);
  }
}

TEST_CASE("enumerate rejects configurations with an infinite candidate set") {
  CHECK_THROWS_WITH_AS(enumerate_index_set(8.0, WeightParams::constant(1.0)),
                       doctest::Contains("unbounded index set"), std::runtime_error);
  // unit explicit weight: arbitrarily high exponents stay under the budget
  CHECK_THROWS_WITH_AS(enumerate_index_set(8.0, WeightParams::explicit_list({1.0})),
                       doctest::Contains("unbounded index set"), std::runtime_error);
  // constant weights work once a maximum dimension is supplied
  auto set = enumerate_index_set(40.0, WeightParams::constant(2.0), 2);
  CHECK(set.size() == 3);
}

TEST_CASE("active dimension scans") {
  // v_j = j against sqrt(64/4) = 4
  CHECK(active_dimension(64.0, WeightParams::polynomial(1.0, 1.0)) == 4);
  CHECK(active_dimension(2.0, WeightParams::exponential(2.0)) == 0);
  // 2^3 = 8 <= 10 < 2^4
  CHECK(active_dimension(400.0, WeightParams::exponential(2.0)) == 3);
  // closed form floor((s / (4 c^2))^{1/(2 alpha)}) for the polynomial family
  for (double s : {16.0, 64.0, 300.0, 1024.0}) {
    const double c = 1.25, alpha = 0.75;
    const int expected =
        static_cast<int>(std::floor(std::pow(s / (4.0 * c * c), 1.0 / (2.0 * alpha))));
    CHECK(active_dimension(s, WeightParams::polynomial(c, alpha)) == expected);
  }
}

TEST_CASE("gamma counts: explicit small cases") {
  CHECK(gamma_exact(3.0, {1.0}) == 3);
  CHECK(gamma_exact(2.0, {1.0, 1.0}) == 1);
  CHECK(gamma_exact(1.5, {1.0, 1.0}) == 0);
}

TEST_CASE("gamma exact equals a triple-loop oracle") {
  const std::vector<double> b{1.0, 2.0, 3.0};
  const double L = 10.0;
  std::uint64_t count = 0;
  for (int n1 = 1; n1 <= 10; ++n1)
    for (int n2 = 1; n2 <= 5; ++n2)
      for (int n3 = 1; n3 <= 3; ++n3)
        if (n1 * b[0] + n2 * b[1] + n3 * b[2] <= L) ++count;
  CHECK(gamma_exact(L, b) == count);
}

TEST_CASE("gamma bound closed form and domination") {
  CHECK(gamma_bound(3.0, {1.0}) == doctest::Approx(3.0));
  CHECK(gamma_exact(3.0, {1.0}) <= gamma_bound(3.0, {1.0}) + 1e-12);
  CHECK(gamma_bound(2.0, {1.0, 1.0}) == doctest::Approx(2.0));

  RngStream rng(80, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng.next_u64() % 5);
    std::vector<double> b(k);
    for (auto& x : b) x = 0.5 + 2.5 * rng.next_uniform();
    const double L = 1.0 + 11.0 * rng.next_uniform();
    CHECK(static_cast<double>(gamma_exact(L, b)) <= gamma_bound(L, b) * (1.0 + 1e-12));
  }
}

TEST_CASE("size bound: threshold t=1 counts only the zero index") {
  CHECK(index_set_size_bound(1.0, {2.0, 3.0}) == doctest::Approx(1.0));
}

TEST_CASE("size bound: one dimension, v=2, t=20") {
  const double A = std::log2(20.0);
  const double a1 = 2.0; // 2 log2(2)
  const double expected = 1.0 + (A - 1.0) / a1;
  CHECK(index_set_size_bound(20.0, {2.0}) == doctest::Approx(expected).epsilon(1e-12));
  auto set = enumerate_index_set(40.0, WeightParams::explicit_list({2.0}));
  CHECK(static_cast<double>(set.size()) <= expected + 1e-9);
}

TEST_CASE("size bound dominates exact enumeration on a grid") {
  const double vals[] = {1.5, 2.0, 4.0};
  for (int d = 1; d <= 4; ++d) {
    for (double v : vals) {
      for (double t = 2.0; t <= 1024.0; t *= 4.0) {
        std::vector<double> v_list(d, v);
        auto set = enumerate_index_set(2.0 * t, WeightParams::explicit_list(v_list));
        const double bound = index_set_size_bound(t, v_list);
        CHECK(static_cast<double>(set.size()) <= bound * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("closed-form constant-weights bound matches its formula and dominates") {
  // (log_{beta^2}(beta^2 s / 2))^d for beta = 2, in the regime where the
  // closed form applies (small d relative to the budget)
  for (double s : {8.0, 64.0, 512.0}) {
    for (int d = 1; d <= 3; ++d) {
      const double bound = corollary_bound_constant(2.0, d, s);
      const double crit = std::log2(s / 2.0) / std::log2(8.0);
      if (d <= crit) {
        const double expected = std::pow(std::log2(4.0 * s / 2.0) / std::log2(4.0),
                                         static_cast<double>(d));
        CHECK(bound == doctest::Approx(expected).epsilon(1e-12));
      }
      auto set = enumerate_index_set(s, WeightParams::constant(2.0), d);
      CHECK(static_cast<double>(set.size()) <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("closed-form exponential-weights bound at beta=2, s=8") {
  const double G = std::log2(4.0); // log2(beta^2)... evaluates to 2
  const double expected =
      1.0 + std::pow(std::exp(3.0) * std::sqrt(G), std::sqrt(G)) /
                (2.0 * 3.14159265358979323846 * std::sqrt(G));
  CHECK(corollary_bound_exponential(2.0, 8.0) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("closed-form bounds dominate enumeration for matching families") {
  for (double s : {8.0, 32.0, 128.0, 1024.0}) {
    {
      auto set = enumerate_index_set(s, WeightParams::exponential(2.0));
      CHECK(static_cast<double>(set.size()) <=
            corollary_bound_exponential(2.0, s) * (1.0 + 1e-9));
    }
    const double c = 1.5, alpha = 1.0;
    if (corollary_polynomial_applicable(c, alpha, s)) {
      auto set = enumerate_index_set(s, WeightParams::polynomial(c, alpha));
      CHECK(static_cast<double>(set.size()) <=
            corollary_bound_polynomial(c, alpha, s) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("index set JSON round trip is the identity") {
  auto set = enumerate_index_set(64.0, WeightParams::polynomial(1.2, 1.0));
  auto text = set.to_json();
  auto back = IndexSet::from_json(text);
  REQUIRE(back.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) CHECK(back.indices[i] == set.indices[i]);
  CHECK(back.sparsity_budget == doctest::Approx(set.sparsity_budget));
  CHECK(back.to_json() == text);
}

TEST_CASE("weight parameter validation") {
  CHECK_THROWS_AS(WeightParams::constant(0.5), std::invalid_argument);
  CHECK_THROWS_AS(WeightParams::polynomial(0.9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightParams::polynomial(1.5, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(WeightParams::exponential(0.99), std::invalid_argument);
  CHECK_THROWS_AS(WeightParams::explicit_list({1.5, 0.8}), std::invalid_argument);
}

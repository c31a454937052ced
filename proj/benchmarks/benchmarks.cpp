#include <benchmark/benchmark.h>

#include "cspg/chebyshev.hpp"
#include "cspg/multiindex.hpp"
#include "cspg/pde.hpp"
#include "cspg/recovery.hpp"
#include "cspg/verify.hpp"

namespace {

void BM_Cheb1d(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  double t = 0.12345;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cspg::cheb1d(degree, t));
    t = -t;
  }
}
BENCHMARK(BM_Cheb1d)->Arg(4)->Arg(16)->Arg(64);

void BM_TensorCheb(benchmark::State& state) {
  cspg::MultiIndex nu;
  for (int j = 1; j <= static_cast<int>(state.range(0)); ++j) nu.set(j, 2);
  cspg::RngStream rng(1, 0);
  const cspg::ParamPoint y = cspg::sample_measure(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cspg::tensor_cheb(nu, y));
}
BENCHMARK(BM_TensorCheb)->Arg(2)->Arg(8)->Arg(32);

void BM_FemSolve(benchmark::State& state) {
  const cspg::DiffusionModel model = cspg::default_model();
  cspg::FemDiscretization disc;
  disc.h = 1.0 / static_cast<double>(state.range(0));
  disc.B = model.dim();
  cspg::RngStream rng(2, 0);
  const cspg::ParamPoint y = cspg::sample_measure(rng, model.dim());
  for (auto _ : state) {
    const cspg::FemSolution sol = cspg::fem_solve(model, y, disc);
    benchmark::DoNotOptimize(sol.h1_seminorm);
  }
}
BENCHMARK(BM_FemSolve)->Arg(64)->Arg(256)->Arg(1024);

void BM_EnumerateIndexSet(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0));
  const cspg::WeightParams w = cspg::WeightParams::polynomial(1.1, 0.75);
  for (auto _ : state) {
    const cspg::IndexSet set = cspg::enumerate_index_set(s, w);
    benchmark::DoNotOptimize(set.size());
  }
}
BENCHMARK(BM_EnumerateIndexSet)->Arg(64)->Arg(512)->Arg(4096);

void BM_BpdnSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cspg::PlantedInstance inst = cspg::make_planted_instance(n, 10.0, 7);
  const int m = cspg::oversampled_m(0.05, 10.0, static_cast<std::size_t>(n));
  std::vector<cspg::ParamPoint> pts(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    cspg::RngStream rng(8, static_cast<std::uint64_t>(l));
    pts[static_cast<std::size_t>(l)] = cspg::sample_measure(rng, inst.dims);
  }
  const cspg::SamplingMatrix phi = cspg::assemble_matrix(pts, inst.set);
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  for (int l = 0; l < m; ++l)
    for (int c = 0; c < phi.n; ++c)
      b[static_cast<std::size_t>(l)] += phi.at(l, c) * inst.coeffs[static_cast<std::size_t>(c)];
  cspg::RecoveryParams rp;
  for (auto _ : state) {
    const cspg::WeightedVector g = cspg::solve_weighted_bpdn(phi, b, inst.omega, rp);
    benchmark::DoNotOptimize(g.values.data());
  }
}
BENCHMARK(BM_BpdnSolve)->Arg(50)->Arg(100);

} // namespace

BENCHMARK_MAIN();

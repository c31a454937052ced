#include "cspg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cspg {

namespace {

// Static index blocks per worker; each slot is written by exactly one task,
// so results are identical to the serial loop for any worker count.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::atomic<int> next{0};
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

} // namespace

double ChebyshevSurrogate::evaluate(const ParamPoint& y) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    acc += coeffs[k] * tensor_cheb(set.indices[k], y);
  return acc;
}

double ChebyshevSurrogate::linf_coefficient_bound() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    acc += std::abs(coeffs[k]) * std::pow(2.0, 0.5 * set.indices[k].order0());
  return acc;
}

ExperimentPlan plan_experiment(double s, const WeightParams& w, double oversample_C,
                               double epsilon, std::uint64_t seed,
                               const DiffusionModel& model,
                               std::optional<int> max_dim) {
  if (!(s >= 2.0)) throw std::invalid_argument("plan_experiment: s must be >= 2");
  if (!(oversample_C > 0.0))
    throw std::invalid_argument("plan_experiment: oversample_C must be > 0");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("plan_experiment: epsilon must be > 0");

  ExperimentPlan plan;
  plan.s = s;
  plan.weights = w;
  plan.oversample_C = oversample_C;
  plan.epsilon = epsilon;
  plan.seed = seed;
  plan.set = enumerate_index_set(s, w, max_dim);
  if (plan.set.indices.empty())
    throw std::runtime_error("plan_experiment: empty index set");

  const auto N = static_cast<double>(plan.set.size());
  const double ls = std::log(std::max(s, 2.0));
  const double lN = std::log(std::max(N, 2.0));
  plan.m = std::max(1, static_cast<int>(std::ceil(oversample_C * s * ls * ls * ls * lN)));
  plan.compressive = plan.m < static_cast<int>(plan.set.size());

  plan.disc = discretization_for(model, epsilon);
  plan.sampling_dim = std::max({1, plan.disc.B, plan.set.active_dim()});
  return plan;
}

ChebyshevSurrogate run_cspg(const DiffusionModel& model, const ExperimentPlan& plan,
                            RecoveryMethod method, int workers) {
  if (plan.m < 1 || plan.set.indices.empty())
    throw std::invalid_argument("run_cspg: invalid plan");

  std::vector<ParamPoint> points(static_cast<std::size_t>(plan.m));
  std::vector<double> b(static_cast<std::size_t>(plan.m));
  std::vector<std::string> failures(static_cast<std::size_t>(plan.m));
  FemDiscretization disc = plan.disc;
  disc.B = std::min(disc.B, plan.sampling_dim);

  parallel_for(plan.m, workers, [&](int l) {
    try {
      RngStream rng(plan.seed, static_cast<std::uint64_t>(l));
      points[static_cast<std::size_t>(l)] = sample_measure(rng, plan.sampling_dim);
      const FemSolution sol =
          fem_solve(model, points[static_cast<std::size_t>(l)], disc);
      b[static_cast<std::size_t>(l)] = eval_functional(model, sol);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(l)] = e.what();
    }
  });
  for (int l = 0; l < plan.m; ++l)
    if (!failures[static_cast<std::size_t>(l)].empty())
      throw std::runtime_error("run_cspg: sample " + std::to_string(l) +
                               " failed: " + failures[static_cast<std::size_t>(l)]);

  const SamplingMatrix phi = assemble_matrix(points, plan.set);
  std::vector<double> om(plan.set.size());
  for (std::size_t k = 0; k < plan.set.size(); ++k)
    om[k] = omega(plan.set.indices[k], plan.weights);

  ChebyshevSurrogate out;
  out.set = plan.set;
  out.plan = plan;
  if (method == RecoveryMethod::Bpdn) {
    RecoveryParams rp;
    rp.tau = 2.0 * std::sqrt(static_cast<double>(plan.m)) * plan.epsilon;
    const WeightedVector g = solve_weighted_bpdn(phi, b, om, rp, &out.solver_stats);
    out.coeffs = g.values;
  } else {
    const WeightedVector g = solve_weighted_iht(phi, b, om, plan.s,
                                                50 * phi.n, &out.solver_stats);
    out.coeffs = g.values;
  }
  return out;
}

ErrorReport estimate_errors(const ChebyshevSurrogate& surrogate,
                            const DiffusionModel& model, int n_test,
                            std::uint64_t seed2, double h_ref, int workers) {
  if (n_test < 2) throw std::invalid_argument("estimate_errors: n_test must be >= 2");
  if (!(h_ref > 0.0 && h_ref <= surrogate.plan.disc.h / 4.0 + 1e-15))
    throw std::invalid_argument(
        "estimate_errors: h_ref must be at most a quarter of the run mesh width");

  const int dims = std::max(surrogate.plan.sampling_dim, model.dim());
  FemDiscretization ref;
  ref.h = h_ref;
  ref.B = model.dim();

  std::vector<double> err(static_cast<std::size_t>(n_test));
  std::vector<std::string> failures(static_cast<std::size_t>(n_test));
  parallel_for(n_test, workers, [&](int i) {
    try {
      RngStream rng(seed2, static_cast<std::uint64_t>(i));
      const ParamPoint y = sample_measure(rng, dims);
      const double fhat = surrogate.evaluate(y);
      const double fref = eval_functional(model, fem_solve(model, y, ref));
      err[static_cast<std::size_t>(i)] = fhat - fref;
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
    }
  });
  for (int i = 0; i < n_test; ++i)
    if (!failures[static_cast<std::size_t>(i)].empty())
      throw std::runtime_error("estimate_errors: test sample " + std::to_string(i) +
                               " failed: " + failures[static_cast<std::size_t>(i)]);

  ErrorReport rep;
  rep.n_test = n_test;
  double sumsq = 0.0;
  for (double e : err) {
    sumsq += e * e;
    rep.linf = std::max(rep.linf, std::abs(e));
  }
  rep.l2 = std::sqrt(sumsq / n_test);
  rep.linf_bound = surrogate.linf_coefficient_bound();

  // Jackknife standard error of the root-mean-square estimate.
  const auto n = static_cast<double>(n_test);
  double mean_theta = 0.0;
  std::vector<double> theta(static_cast<std::size_t>(n_test));
  for (int i = 0; i < n_test; ++i) {
    const double e = err[static_cast<std::size_t>(i)];
    theta[static_cast<std::size_t>(i)] = std::sqrt((sumsq - e * e) / (n - 1.0));
    mean_theta += theta[static_cast<std::size_t>(i)];
  }
  mean_theta /= n;
  double var = 0.0;
  for (double t : theta) var += (t - mean_theta) * (t - mean_theta);
  rep.l2_se = std::sqrt((n - 1.0) / n * var);
  return rep;
}

WeightedVector reference_coefficients_lowdim(const DiffusionModel& model,
                                             const IndexSet& set, int n_quad,
                                             double h_ref) {
  const int dims = std::max(1, set.active_dim());
  if (dims > 6)
    throw std::invalid_argument(
        "reference_coefficients_lowdim: active dimension exceeds 6");
  for (const MultiIndex& nu : set.indices)
    if (nu.max_dim() > dims)
      throw std::invalid_argument(
          "reference_coefficients_lowdim: index support exceeds active dimension");
  double total = 1.0;
  for (int k = 0; k < dims; ++k) total *= n_quad;
  if (total > 1e7)
    throw std::invalid_argument(
        "reference_coefficients_lowdim: tensor quadrature budget exceeded");

  // Coefficients of the dimension-truncated functional: the FEM solve keeps
  // only the dimensions the quadrature actually varies.
  FemDiscretization disc;
  disc.h = h_ref;
  disc.B = std::min(dims, model.dim());

  const QuadratureRule q = quad_rule(n_quad);
  const auto nd = static_cast<std::size_t>(dims);
  std::vector<std::size_t> idx(nd, 0);
  ParamPoint y(nd);
  std::vector<double> acc(set.size(), 0.0);
  while (true) {
    double wgt = 1.0;
    for (std::size_t k = 0; k < nd; ++k) {
      y[k] = q.nodes[idx[k]];
      wgt *= q.weights[idx[k]];
    }
    const double f = eval_functional(model, fem_solve(model, y, disc));
    for (std::size_t k = 0; k < set.size(); ++k)
      acc[k] += wgt * f * tensor_cheb(set.indices[k], y);
    std::size_t k = 0;
    for (; k < nd; ++k) {
      if (++idx[k] < q.nodes.size()) break;
      idx[k] = 0;
    }
    if (k == nd) break;
  }

  WeightedVector out;
  out.values = std::move(acc);
  out.weights.resize(set.size());
  for (std::size_t k = 0; k < set.size(); ++k)
    out.weights[k] = omega(set.indices[k], set.weights);
  return out;
}

bool check_delta_admissible(const std::vector<double>& rho,
                            const DiffusionModel& model, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("check_delta_admissible: delta must be in (0,1)");
  if (rho.empty())
    throw std::invalid_argument("check_delta_admissible: empty sequence");
  double sum = 0.0;
  for (int j = 1; j <= model.dim(); ++j) {
    const double r = j <= static_cast<int>(rho.size())
                         ? rho[static_cast<std::size_t>(j) - 1]
                         : rho.back();
    sum += r * beta0_upper(model, j);
  }
  return sum <= 1.0 - delta;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 pairs");
  std::vector<double> lx, ly;
  for (const auto& [x, e] : pairs) {
    if (!(x > 0.0 && e > 0.0))
      throw std::invalid_argument("rate_fit: values must be positive");
    lx.push_back(std::log(x));
    ly.push_back(std::log(e));
  }
  const auto n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate_fit: degenerate abscissae");
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

} // namespace cspg

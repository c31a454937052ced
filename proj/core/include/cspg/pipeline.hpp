#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspg/multiindex.hpp"
#include "cspg/pde.hpp"
#include "cspg/recovery.hpp"

namespace cspg {

/// Everything needed to reproduce one sampling-and-recovery experiment.
struct ExperimentPlan {
  double s = 0.0;
  WeightParams weights = WeightParams::constant(1.0);
  double oversample_C = 1.0;
  int m = 0; // ceil(C * s * ln^3(max(s,2)) * ln(max(N,2)))
  IndexSet set;
  double epsilon = 0.0; // per-sample PDE accuracy
  std::uint64_t seed = 0;
  int sampling_dim = 0; // B-bar: max(truncation level, active dim of set)
  FemDiscretization disc;
  bool compressive = true; // false when m >= N
};

enum class RecoveryMethod { Bpdn, Iht };

struct ChebyshevSurrogate {
  IndexSet set;
  std::vector<double> coeffs;
  ExperimentPlan plan;
  RecoveryStats solver_stats;

  double evaluate(const ParamPoint& y) const;
  /// sum |g_nu| 2^{||nu||_0 / 2}, a computable sup-norm bound.
  double linf_coefficient_bound() const;
};

struct ErrorReport {
  double l2 = 0.0;
  double l2_se = 0.0;   // jackknife standard error of the L2 estimate
  double linf = 0.0;    // sampled maximum (lower bound on the true sup)
  double linf_bound = 0.0; // coefficient-sum upper bound
  int n_test = 0;
};

/// Fills N, m, sampling dimension, and the FEM discretization for (s, w, C,
/// epsilon). Sets compressive = false when m >= N.
ExperimentPlan plan_experiment(double s, const WeightParams& w, double oversample_C,
                               double epsilon, std::uint64_t seed,
                               const DiffusionModel& model,
                               std::optional<int> max_dim = std::nullopt);

/// The full sampling + solve + recovery pass: draws m points from the product
/// Chebyshev measure, FEM-solves each, assembles the sampling matrix, and
/// recovers the coefficients with BPDN (radius 2 sqrt(m) epsilon) or IHT.
/// Deterministic for fixed (plan, model, seed) at any worker count.
ChebyshevSurrogate run_cspg(const DiffusionModel& model, const ExperimentPlan& plan,
                            RecoveryMethod method = RecoveryMethod::Bpdn,
                            int workers = 1);

/// Monte Carlo L2(eta) and sampled-sup error of the surrogate against fine
/// FEM reference solves at mesh width h_ref.
ErrorReport estimate_errors(const ChebyshevSurrogate& surrogate,
                            const DiffusionModel& model, int n_test,
                            std::uint64_t seed2, double h_ref, int workers = 1);

/// Tensor Gauss-Chebyshev projection of y -> G(u_h(y)) onto each T_nu in the
/// set. Requires active dimension <= 6.
WeightedVector reference_coefficients_lowdim(const DiffusionModel& model,
                                             const IndexSet& set, int n_quad,
                                             double h_ref);

/// True iff sum_j rho_j beta0_upper(j) <= 1 - delta.
bool check_delta_admissible(const std::vector<double>& rho,
                            const DiffusionModel& model, double delta);

struct RateFit {
  double exponent = 0.0;
  double r2 = 0.0;
};

/// Least-squares slope of log(err) against log(x).
RateFit rate_fit(const std::vector<std::pair<double, double>>& pairs);

} // namespace cspg

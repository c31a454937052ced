#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspg/chebyshev.hpp"
#include "cspg/multiindex.hpp"

namespace cspg {

/// Coefficient vector aligned with an index-set ordering, together with the
/// per-entry weights omega_nu.
struct WeightedVector {
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const { return values.size(); }
  void validate() const; // lengths equal, weights >= 1
};

/// Dense m x N matrix with rows <-> sample points and columns <-> indices.
struct SamplingMatrix {
  std::vector<double> data; // row-major
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0; // provenance of the sample points (0 = external)

  double& at(int row, int col) { return data[static_cast<std::size_t>(row) * n + col]; }
  double at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * n + col];
  }
};

struct RecoveryParams {
  double tau = 0.0;      // residual radius of the constraint ||Phi g - b|| <= tau
  int max_iters = 0;     // 0 = default 50 * N
  double tol = 1e-9;     // relative-change + feasibility + gap tolerance
  double step_scale = 1.0;
};

struct RecoveryStats {
  int iterations = 0;
  double residual = 0.0;   // ||Phi g - b||_2
  double objective = 0.0;  // ||g||_{omega,1}
  double dual_gap = 0.0;
  bool converged = false;
};

/// (sum_j |x_j|^p omega_j^{2-p})^{1/p} for p in (0,2].
double weighted_lp_norm(const WeightedVector& x, double p);

/// sum over the support of omega_j^2; support = {j : |x_j| > 1e-14 * max|x|}.
double weighted_sparsity(const WeightedVector& x);

struct STermResult {
  std::vector<int> support;
  double error = 0.0; // weighted lq norm of the tail
};

/// Exact minimizer of the weighted-lq tail over supports S with
/// sum_{j in S} omega_j^2 <= s. Exhaustive for N <= 25; knapsack DP on
/// integer-scaled budgets for N <= 200.
STermResult best_weighted_s_term_oracle(const WeightedVector& x, double s, double q);

/// Greedy surrogate: picks entries by tail-reduction per unit weight cost.
/// Error is always >= the oracle's.
STermResult quasi_best_s_term(const WeightedVector& x, double s, double q);

/// 2^{1/p - 1/q} s^{1/q - 1/p} * weighted_lp_norm(x, p), for 0 < p < q <= 2
/// and s >= 2 max omega^2.
double stechkin_bound(const WeightedVector& x, double p, double q, double s);

/// Phi_{l,nu} = T_nu(y_l) over the given points and index set.
SamplingMatrix assemble_matrix(const std::vector<ParamPoint>& points,
                               const IndexSet& set);

/// Exhaustive weighted restricted isometry constant of Phi/sqrt(m):
/// max over supports S with sum omega^2 <= s of the deviation of the extreme
/// eigenvalues of the S-block of the Gram matrix from 1.
/// Throws if more than max_supports supports are admissible.
double wrip_constant(const SamplingMatrix& phi_scaled, const std::vector<double>& omega,
                     double s, std::size_t max_supports = 1000000);

/// min ||g||_{omega,1} subject to ||Phi g - b||_2 <= tau, by a first-order
/// primal-dual (Chambolle-Pock) iteration.
WeightedVector solve_weighted_bpdn(const SamplingMatrix& phi,
                                   const std::vector<double>& b,
                                   const std::vector<double>& omega,
                                   const RecoveryParams& params,
                                   RecoveryStats* stats = nullptr);

/// Gradient step + greedy weighted hard thresholding with budget s;
/// returns the best-residual iterate.
WeightedVector solve_weighted_iht(const SamplingMatrix& phi,
                                  const std::vector<double>& b,
                                  const std::vector<double>& omega, double s,
                                  int max_iters, RecoveryStats* stats = nullptr);

} // namespace cspg

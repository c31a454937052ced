#include "cspg/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cspg {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;

ConstMap map_matrix(const SamplingMatrix& phi) {
  return ConstMap(phi.data.data(), phi.m, phi.n);
}

// Largest singular value of Phi via power iteration on Phi^T Phi,
// deterministic start, 1e-6 relative accuracy.
double operator_norm(const SamplingMatrix& phi) {
  const auto A = map_matrix(phi);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(phi.n).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = A.transpose() * (A * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double prev = lambda;
    lambda = nw;
    v = w;
    if (it > 2 && std::abs(lambda - prev) <= 1e-6 * lambda) break;
  }
  return std::sqrt(lambda);
}

double support_threshold(const std::vector<double>& x) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  return 1e-14 * mx;
}

} // namespace

void WeightedVector::validate() const {
  if (values.size() != weights.size())
    throw std::invalid_argument("WeightedVector: values/weights length mismatch");
  for (double w : weights)
    if (!(w >= 1.0)) throw std::invalid_argument("WeightedVector: weights must be >= 1");
}

double weighted_lp_norm(const WeightedVector& x, double p) {
  if (!(p > 0.0 && p <= 2.0))
    throw std::invalid_argument("weighted_lp_norm: p must be in (0, 2]");
  x.validate();
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    acc += std::pow(std::abs(x.values[j]), p) * std::pow(x.weights[j], 2.0 - p);
  return std::pow(acc, 1.0 / p);
}

double weighted_sparsity(const WeightedVector& x) {
  x.validate();
  const double thr = support_threshold(x.values);
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (std::abs(x.values[j]) > thr) acc += x.weights[j] * x.weights[j];
  return acc;
}

namespace {

struct Item {
  int index;
  double cost;   // omega_j^2
  double profit; // |x_j|^q omega_j^{2-q}, the tail-mass removed by keeping j
};

// Exhaustive branch-and-bound over supports with total cost <= s,
// maximizing total profit. Items are passed sorted by profit density.
void knapsack_dfs(const std::vector<Item>& items, std::size_t k, double cost_left,
                  double profit, std::vector<int>& chosen, double& best_profit,
                  std::vector<int>& best_support) {
  if (k == items.size()) {
    if (profit > best_profit) {
      best_profit = profit;
      best_support = chosen;
    }
    return;
  }
  // Fractional-relaxation upper bound on the remaining profit.
  double bound = profit, room = cost_left;
  for (std::size_t i = k; i < items.size() && room > 0.0; ++i) {
    const double take = std::min(1.0, room / items[i].cost);
    bound += take * items[i].profit;
    room -= take * items[i].cost;
  }
  if (bound <= best_profit) return;

  if (items[k].cost <= cost_left) {
    chosen.push_back(items[k].index);
    knapsack_dfs(items, k + 1, cost_left - items[k].cost, profit + items[k].profit,
                 chosen, best_profit, best_support);
    chosen.pop_back();
  }
  knapsack_dfs(items, k + 1, cost_left, profit, chosen, best_profit, best_support);
}

// DP over integer-scaled costs (rounded up, so every selected support is
// feasible for the true budget).
std::vector<int> knapsack_dp(const std::vector<Item>& items, double s) {
  constexpr int kBuckets = 100000;
  const double scale = kBuckets / s;
  const int cap = kBuckets;
  std::vector<double> best(static_cast<std::size_t>(cap) + 1, 0.0);
  std::vector<std::vector<std::uint8_t>> take(
      items.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(cap) + 1, 0));
  for (std::size_t i = 0; i < items.size(); ++i) {
    const int c = static_cast<int>(std::ceil(items[i].cost * scale - 1e-9));
    if (c > cap) continue;
    for (int w = cap; w >= c; --w) {
      const double cand = best[static_cast<std::size_t>(w - c)] + items[i].profit;
      if (cand > best[static_cast<std::size_t>(w)]) {
        best[static_cast<std::size_t>(w)] = cand;
        take[i][static_cast<std::size_t>(w)] = 1;
      }
    }
  }
  std::vector<int> support;
  int w = cap;
  for (std::size_t i = items.size(); i-- > 0;) {
    if (take[i][static_cast<std::size_t>(w)]) {
      support.push_back(items[i].index);
      w -= static_cast<int>(std::ceil(items[i].cost * scale - 1e-9));
    }
  }
  return support;
}

double tail_error(const WeightedVector& x, const std::vector<int>& support, double q) {
  std::vector<bool> kept(x.size(), false);
  for (int j : support) kept[static_cast<std::size_t>(j)] = true;
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!kept[j])
      acc += std::pow(std::abs(x.values[j]), q) * std::pow(x.weights[j], 2.0 - q);
  return std::pow(acc, 1.0 / q);
}

std::vector<Item> make_items(const WeightedVector& x, double q) {
  const double thr = support_threshold(x.values);
  std::vector<Item> items;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x.values[j]) <= thr) continue;
    items.push_back({static_cast<int>(j), x.weights[j] * x.weights[j],
                     std::pow(std::abs(x.values[j]), q) *
                         std::pow(x.weights[j], 2.0 - q)});
  }
  // Profit density order: best candidates first, which tightens both the
  // branch-and-bound pruning and the greedy surrogate.
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    const double da = a.profit / a.cost, db = b.profit / b.cost;
    if (da != db) return da > db;
    return a.index < b.index;
  });
  return items;
}

} // namespace

STermResult best_weighted_s_term_oracle(const WeightedVector& x, double s, double q) {
  if (!(q > 0.0 && q <= 2.0))
    throw std::invalid_argument("best_weighted_s_term_oracle: q must be in (0, 2]");
  x.validate();
  if (x.size() > 200)
    throw std::invalid_argument("best_weighted_s_term_oracle: N > 200 budget exceeded");
  std::vector<Item> items = make_items(x, q);

  std::vector<int> support;
  if (x.size() <= 25) {
    double best_profit = -1.0;
    std::vector<int> chosen;
    knapsack_dfs(items, 0, s, 0.0, chosen, best_profit, support);
  } else {
    support = knapsack_dp(items, s);
  }
  std::sort(support.begin(), support.end());
  return {support, tail_error(x, support, q)};
}

STermResult quasi_best_s_term(const WeightedVector& x, double s, double q) {
  if (!(q > 0.0 && q <= 2.0))
    throw std::invalid_argument("quasi_best_s_term: q must be in (0, 2]");
  x.validate();
  std::vector<Item> items = make_items(x, q);
  std::vector<int> support;
  double budget = s;
  for (const Item& it : items) {
    if (it.cost <= budget) {
      support.push_back(it.index);
      budget -= it.cost;
    }
  }
  std::sort(support.begin(), support.end());
  return {support, tail_error(x, support, q)};
}

double stechkin_bound(const WeightedVector& x, double p, double q, double s) {
  if (!(p > 0.0 && p < q && q <= 2.0))
    throw std::invalid_argument("stechkin_bound: need 0 < p < q <= 2");
  double max_w2 = 0.0;
  for (double w : x.weights) max_w2 = std::max(max_w2, w * w);
  if (!(s >= 2.0 * max_w2))
    throw std::invalid_argument("stechkin_bound: need s >= 2 max omega^2");
  return std::pow(2.0, 1.0 / p - 1.0 / q) * std::pow(s, 1.0 / q - 1.0 / p) *
         weighted_lp_norm(x, p);
}

SamplingMatrix assemble_matrix(const std::vector<ParamPoint>& points,
                               const IndexSet& set) {
  if (points.empty()) throw std::invalid_argument("assemble_matrix: no sample points");
  SamplingMatrix phi;
  phi.m = static_cast<int>(points.size());
  phi.n = static_cast<int>(set.size());
  phi.data.resize(static_cast<std::size_t>(phi.m) * phi.n);
  for (int l = 0; l < phi.m; ++l)
    for (int c = 0; c < phi.n; ++c)
      phi.at(l, c) = tensor_cheb(set.indices[static_cast<std::size_t>(c)],
                                 points[static_cast<std::size_t>(l)]);
  return phi;
}

namespace {

// Visits every support maximal under the budget: extreme-eigenvalue deviation
// only grows when a support is enlarged, so maximal supports determine delta.
void wrip_dfs(const Eigen::MatrixXd& gram, const std::vector<double>& omega2,
              double budget, int start, std::vector<int>& support,
              std::size_t& visited, std::size_t max_supports, double& delta) {
  if (++visited > max_supports)
    throw std::runtime_error("wrip_constant: admissible support budget exceeded");
  bool extensible = false;
  for (int j = start; j < static_cast<int>(omega2.size()); ++j) {
    if (omega2[static_cast<std::size_t>(j)] > budget) continue;
    extensible = true;
    support.push_back(j);
    wrip_dfs(gram, omega2, budget - omega2[static_cast<std::size_t>(j)], j + 1,
             support, visited, max_supports, delta);
    support.pop_back();
  }
  if (extensible || support.empty()) return;

  const int k = static_cast<int>(support.size());
  Eigen::MatrixXd sub(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      sub(a, b) = gram(support[static_cast<std::size_t>(a)],
                       support[static_cast<std::size_t>(b)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub,
                                                    Eigen::EigenvaluesOnly);
  delta = std::max({delta, es.eigenvalues().maxCoeff() - 1.0,
                    1.0 - es.eigenvalues().minCoeff()});
}

} // namespace

double wrip_constant(const SamplingMatrix& phi_scaled, const std::vector<double>& omega,
                     double s, std::size_t max_supports) {
  if (static_cast<int>(omega.size()) != phi_scaled.n)
    throw std::invalid_argument("wrip_constant: omega length mismatch");
  const auto A = map_matrix(phi_scaled);
  const Eigen::MatrixXd gram = A.transpose() * A;
  std::vector<double> omega2(omega.size());
  for (std::size_t j = 0; j < omega.size(); ++j) omega2[j] = omega[j] * omega[j];
  double delta = 0.0;
  std::vector<int> support;
  std::size_t visited = 0;
  wrip_dfs(gram, omega2, s, 0, support, visited, max_supports, delta);
  return delta;
}

namespace {

// Accelerated proximal-gradient (FISTA) pass on the penalized form
// min 0.5 ||Phi g - b||^2 + lambda sum omega_j |g_j|, warm-started at g.
// Stops on a small relative duality gap; returns the residual norm.
double lasso_fista(const ConstMap& A, const Eigen::VectorXd& bv,
                   const Eigen::VectorXd& wv, double lambda, double L,
                   double gap_tol, int max_iters, Eigen::VectorXd& g,
                   int& iters_used) {
  const double step = 1.0 / (L * L);
  Eigen::VectorXd z = g;
  double t_acc = 1.0;
  double rnorm = (A * g - bv).norm();
  for (int it = 1; it <= max_iters; ++it) {
    ++iters_used;
    const Eigen::VectorXd resid_z = A * z - bv;
    Eigen::VectorXd g_new = z - step * (A.transpose() * resid_z);
    for (int j = 0; j < g.size(); ++j) {
      const double thr = step * lambda * wv(j);
      g_new(j) = std::copysign(std::max(std::abs(g_new(j)) - thr, 0.0), g_new(j));
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    z = g_new + (t_acc - 1.0) / t_new * (g_new - g);
    t_acc = t_new;
    g = g_new;

    if (it % 10 == 0 || it == max_iters) {
      const Eigen::VectorXd resid = A * g - bv;
      rnorm = resid.norm();
      double obj = 0.5 * rnorm * rnorm;
      for (int j = 0; j < g.size(); ++j) obj += lambda * wv(j) * std::abs(g(j));
      // Dual point: residual scaled into |Phi^T nu|_j <= lambda omega_j.
      const Eigen::VectorXd atr = A.transpose() * resid;
      double scale = 1.0;
      for (int j = 0; j < g.size(); ++j)
        if (std::abs(atr(j)) > lambda * wv(j))
          scale = std::min(scale, lambda * wv(j) / std::abs(atr(j)));
      const Eigen::VectorXd nu = scale * resid;
      const double dual = -0.5 * nu.squaredNorm() - nu.dot(bv);
      if (obj - dual <= gap_tol * (1.0 + std::abs(obj))) break;
    }
  }
  return (A * g - bv).norm();
}

} // namespace

WeightedVector solve_weighted_bpdn(const SamplingMatrix& phi,
                                   const std::vector<double>& b,
                                   const std::vector<double>& omega,
                                   const RecoveryParams& params,
                                   RecoveryStats* stats) {
  if (static_cast<int>(b.size()) != phi.m)
    throw std::invalid_argument("solve_weighted_bpdn: rhs length mismatch");
  if (static_cast<int>(omega.size()) != phi.n)
    throw std::invalid_argument("solve_weighted_bpdn: omega length mismatch");
  if (params.tau < 0.0)
    throw std::invalid_argument("solve_weighted_bpdn: tau must be >= 0");

  const int n = phi.n, m = phi.m;
  const auto A = map_matrix(phi);
  const Eigen::Map<const Eigen::VectorXd> bv(b.data(), m);
  const Eigen::Map<const Eigen::VectorXd> wv(omega.data(), n);
  const double tol = params.tol;
  const int max_iters = params.max_iters > 0 ? params.max_iters : 50 * n;

  WeightedVector out;
  out.weights = omega;
  out.values.assign(static_cast<std::size_t>(n), 0.0);

  RecoveryStats local;
  RecoveryStats& st = stats ? *stats : local;
  st = RecoveryStats{};

  const double norm_b = bv.norm();
  if (norm_b <= params.tau) { // zero is feasible, hence optimal
    st.converged = true;
    st.residual = norm_b;
    return out;
  }

  const double L = operator_norm(phi);
  if (L == 0.0) throw std::runtime_error("solve_weighted_bpdn: zero operator");

  auto finish = [&](const Eigen::VectorXd& g, int iters, double rnorm,
                    double best_dual) {
    double objective = 0.0;
    for (int j = 0; j < n; ++j) objective += wv(j) * std::abs(g(j));
    st.iterations = iters;
    st.residual = rnorm;
    st.objective = objective;
    st.dual_gap = objective - best_dual;
    st.converged = true;
    out.values.assign(g.data(), g.data() + n);
    return out;
  };

  if (params.tau == 0.0) {
    // Equality-constrained program via the Chambolle-Pock primal-dual scheme.
    const double step = params.step_scale * 0.99 / L;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd g_bar = g;
    double best_dual = -std::numeric_limits<double>::infinity();
    double best_residual = std::numeric_limits<double>::infinity();
    int since_improved = 0;
    double rnorm = norm_b;
    for (int it = 1; it <= max_iters; ++it) {
      y += step * (A * g_bar - bv);
      Eigen::VectorXd g_new = g - step * (A.transpose() * y);
      for (int j = 0; j < n; ++j) {
        const double thr = step * wv(j);
        g_new(j) = std::copysign(std::max(std::abs(g_new(j)) - thr, 0.0), g_new(j));
      }
      g_bar = 2.0 * g_new - g;
      const double change = (g_new - g).norm();
      g = g_new;
      rnorm = (A * g - bv).norm();
      st.iterations = it;
      st.residual = rnorm;

      if (change <= tol * (1.0 + g.norm()) && rnorm <= std::max(tol, 1e-12) * norm_b) {
        const Eigen::VectorXd aty = A.transpose() * y;
        double scale = 1.0;
        for (int j = 0; j < n; ++j)
          if (std::abs(aty(j)) > wv(j)) scale = std::min(scale, wv(j) / std::abs(aty(j)));
        best_dual = std::max(best_dual, -scale * bv.dot(y));
        return finish(g, it, rnorm, best_dual);
      }
      if (rnorm < best_residual * (1.0 - 1e-7)) {
        best_residual = std::min(best_residual, rnorm);
        since_improved = 0;
      } else {
        ++since_improved;
      }
      if (since_improved > 5000 && best_residual > 1e-6 * norm_b)
        throw std::runtime_error(
            "solve_weighted_bpdn: equality constraint unreachable (residual stalled at " +
            std::to_string(best_residual) + ")");
    }
    throw std::runtime_error("solve_weighted_bpdn: no convergence in " +
                             std::to_string(max_iters) + " iterations (residual " +
                             std::to_string(rnorm) + ")");
  }

  // tau > 0: solve the penalized form and drive its residual into the window
  // [tau (1 - window), tau] by a monotone secant/bisection search on lambda.
  // At the matching lambda the penalized minimizer solves the constrained
  // program, and landing just inside the ball keeps the iterate feasible.
  const double window = std::max(tol, 1e-5);
  const Eigen::VectorXd atb = A.transpose() * bv;
  double lambda_hi = 0.0;
  for (int j = 0; j < n; ++j) lambda_hi = std::max(lambda_hi, std::abs(atb(j)) / wv(j));
  if (lambda_hi == 0.0) throw std::runtime_error("solve_weighted_bpdn: zero operator");
  double lambda_lo = 0.0, r_lo = -1.0; // residual at lambda_lo unknown (< tau if feasible)
  double lambda = 0.5 * lambda_hi, r_hi = norm_b;

  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  int iters_used = 0;
  const double gap_tol = std::min(1e-10, tol);
  for (int outer = 0; outer < 200; ++outer) {
    const double rnorm = lasso_fista(A, bv, wv, lambda, L, gap_tol,
                                     std::max(max_iters, 2000), g, iters_used);
    if (rnorm <= params.tau && rnorm >= params.tau * (1.0 - window)) {
      const Eigen::VectorXd resid = A * g - bv;
      const Eigen::VectorXd atr = A.transpose() * resid;
      double scale = 1.0;
      for (int j = 0; j < n; ++j)
        if (std::abs(atr(j)) > lambda * wv(j))
          scale = std::min(scale, lambda * wv(j) / std::abs(atr(j)));
      const Eigen::VectorXd y_feas = scale / lambda * resid; // |Phi^T y| <= omega
      const double best_dual = -bv.dot(y_feas) - params.tau * y_feas.norm();
      return finish(g, iters_used, rnorm, best_dual);
    }
    if (rnorm > params.tau) {
      lambda_hi = lambda;
      r_hi = rnorm;
    } else {
      lambda_lo = lambda;
      r_lo = rnorm;
    }
    if (lambda_hi <= 1e-14 * norm_b && r_hi > params.tau * (1.0 + window))
      throw std::runtime_error(
          "solve_weighted_bpdn: infeasible radius (attainable residual " +
          std::to_string(r_hi) + " > tau)");
    // Secant step on the monotone residual-vs-lambda curve, safeguarded by
    // keeping the iterate strictly inside the current bracket.
    double next;
    if (r_lo >= 0.0) {
      const double target = params.tau * (1.0 - 0.5 * window);
      next = lambda_lo + (target - r_lo) * (lambda_hi - lambda_lo) /
                             std::max(r_hi - r_lo, 1e-300);
      const double lo_guard = lambda_lo + 0.05 * (lambda_hi - lambda_lo);
      const double hi_guard = lambda_hi - 0.05 * (lambda_hi - lambda_lo);
      next = std::clamp(next, lo_guard, hi_guard);
    } else {
      next = 0.5 * lambda_hi; // no lower residual sample yet: geometric descent
    }
    lambda = next;
  }
  throw std::runtime_error(
      "solve_weighted_bpdn: penalty search failed to match the residual radius");
}

WeightedVector solve_weighted_iht(const SamplingMatrix& phi,
                                  const std::vector<double>& b,
                                  const std::vector<double>& omega, double s,
                                  int max_iters, RecoveryStats* stats) {
  if (static_cast<int>(b.size()) != phi.m)
    throw std::invalid_argument("solve_weighted_iht: rhs length mismatch");
  if (static_cast<int>(omega.size()) != phi.n)
    throw std::invalid_argument("solve_weighted_iht: omega length mismatch");

  const int n = phi.n;
  const auto A = map_matrix(phi);
  const Eigen::Map<const Eigen::VectorXd> bv(b.data(), phi.m);
  const double L = operator_norm(phi);
  const double mu = L > 0.0 ? 1.0 / (L * L) : 1.0;

  WeightedVector x;
  x.weights = omega;
  x.values.assign(static_cast<std::size_t>(n), 0.0);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);

  double best_resid = bv.norm();
  Eigen::VectorXd best_g = g;
  int rising = 0, iters = 0;
  double prev = best_resid;

  for (int it = 1; it <= max_iters && best_resid > 1e-14; ++it) {
    iters = it;
    g += mu * (A.transpose() * (bv - A * g));
    // Weighted hard threshold: keep the greedy quasi-best support of budget s.
    WeightedVector cand;
    cand.weights = omega;
    cand.values.assign(g.data(), g.data() + n);
    const STermResult keep = quasi_best_s_term(cand, s, 2.0);
    Eigen::VectorXd thr = Eigen::VectorXd::Zero(n);
    for (int j : keep.support) thr(j) = g(j);
    g = thr;

    const double r = (A * g - bv).norm();
    if (r < best_resid) {
      best_resid = r;
      best_g = g;
    }
    if (r > prev) {
      if (++rising >= 20)
        throw std::runtime_error(
            "solve_weighted_iht: residual diverging; reduce the step size");
    } else {
      rising = 0;
    }
    prev = r;
  }

  x.values.assign(best_g.data(), best_g.data() + n);
  if (stats) {
    *stats = RecoveryStats{};
    stats->iterations = iters;
    stats->residual = best_resid;
    for (int j = 0; j < n; ++j) stats->objective += omega[static_cast<std::size_t>(j)] * std::abs(best_g(j));
    stats->converged = best_resid <= 1e-8 * std::max(1.0, bv.norm());
  }
  return x;
}

} // namespace cspg

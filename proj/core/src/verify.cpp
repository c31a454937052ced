#include "cspg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cspg/chebyshev.hpp"
#include "cspg/pde.hpp"
#include "cspg/pipeline.hpp"

namespace cspg {

namespace {

double uniform_in(RngStream& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_uniform();
}

double gaussian(RngStream& rng) {
  const double u1 = std::max(rng.next_uniform(), 1e-300);
  const double u2 = rng.next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

CheckResult check(const std::string& name, bool pass, const std::string& detail) {
  return {name, pass, detail};
}

// ---------------------------------------------------------------- chebyshev

SuiteReport suite_chebyshev(std::uint64_t seed) {
  SuiteReport rep{"chebyshev", {}};

  {
    RngStream rng(seed, 1);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const int j = static_cast<int>(rng.next_uniform() * 51);
      const double t = uniform_in(rng, -1.0, 1.0);
      const double ref = j == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(j * std::acos(t));
      worst = std::max(worst, std::abs(cheb1d(j, t) - ref));
    }
    rep.checks.push_back(check("recurrence-vs-trigonometric", worst <= 1e-13,
                               "max |diff| = " + fmt(worst)));
  }

  {
    const QuadratureRule q = quad_rule(32);
    double worst = 0.0;
    for (int j = 0; j <= 20; ++j)
      for (int k = 0; k <= 20; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
          acc += q.weights[i] * cheb1d(j, q.nodes[i]) * cheb1d(k, q.nodes[i]);
        worst = std::max(worst, std::abs(acc - (j == k ? 1.0 : 0.0)));
      }
    rep.checks.push_back(check("quadrature-orthonormality", worst <= 1e-12,
                               "max |<Tj,Tk> - delta| = " + fmt(worst)));
  }

  {
    RngStream rng(seed, 2);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const ParamPoint y = sample_measure(rng, 1);
      const double t1 = cheb1d(1, y[0]);
      s1 += t1;
      s2 += t1 * t1;
    }
    const double mean = s1 / n, mean2 = s2 / n;
    const double band1 = 3.0 / std::sqrt(static_cast<double>(n));
    const double band2 = 3.0 * std::sqrt(0.5) / std::sqrt(static_cast<double>(n));
    rep.checks.push_back(check("sample-moments",
                               std::abs(mean) <= band1 && std::abs(mean2 - 1.0) <= band2,
                               "mean T1 = " + fmt(mean) + ", mean T1^2 = " + fmt(mean2)));
  }

  {
    RngStream rng(seed, 3);
    const int n = 10000;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const ParamPoint y = sample_measure(rng, 1);
      u[static_cast<std::size_t>(i)] = std::acos(y[0]) / std::numbers::pi;
    }
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e1 = static_cast<double>(i) / n, e2 = static_cast<double>(i + 1) / n;
      ks = std::max({ks, std::abs(u[static_cast<std::size_t>(i)] - e1),
                     std::abs(u[static_cast<std::size_t>(i)] - e2)});
    }
    const double crit = 1.628 / std::sqrt(static_cast<double>(n)); // 99% level
    rep.checks.push_back(check("arcsine-distribution-ks", ks < crit,
                               "KS = " + fmt(ks) + " (crit " + fmt(crit) + ")"));
  }

  {
    // (1/m) Phi^T Phi -> I at the Monte Carlo rate on a small fixed set.
    const IndexSet set = enumerate_index_set(24.0, WeightParams::explicit_list({1.5, 1.5}));
    std::vector<std::pair<double, double>> pts;
    for (const int m : {1000, 4000, 16000}) {
      std::vector<ParamPoint> points(static_cast<std::size_t>(m));
      for (int l = 0; l < m; ++l) {
        RngStream rng(seed + 7, static_cast<std::uint64_t>(l));
        points[static_cast<std::size_t>(l)] = sample_measure(rng, 2);
      }
      const SamplingMatrix phi = assemble_matrix(points, set);
      double dev = 0.0;
      for (int a = 0; a < phi.n; ++a)
        for (int c = 0; c < phi.n; ++c) {
          double g = 0.0;
          for (int l = 0; l < m; ++l) g += phi.at(l, a) * phi.at(l, c);
          dev += std::pow(g / m - (a == c ? 1.0 : 0.0), 2.0);
        }
      pts.emplace_back(m, std::sqrt(dev));
    }
    const RateFit fit = rate_fit(pts);
    rep.checks.push_back(check("gram-monte-carlo-rate",
                               fit.exponent < -0.2 && fit.exponent > -0.9,
                               "fitted exponent = " + fmt(fit.exponent)));
  }

  return rep;
}

// ----------------------------------------------------------------- counting

SuiteReport suite_counting(std::uint64_t seed) {
  SuiteReport rep{"counting", {}};
  const double vals[3] = {1.5, 2.0, 4.0};

  {
    RngStream rng(seed, 11);
    int configs = 0, holds = 0;
    for (int d = 1; d <= 6; ++d) {
      std::vector<std::vector<double>> lists;
      for (double v : vals) lists.emplace_back(static_cast<std::size_t>(d), v);
      for (int extra = 0; extra < 12; ++extra) {
        std::vector<double> v(static_cast<std::size_t>(d));
        for (auto& x : v) x = vals[static_cast<int>(rng.next_uniform() * 3)];
        lists.push_back(std::move(v));
      }
      for (const auto& v : lists)
        for (const double t : {4.0, 64.0, 1024.0}) {
          ++configs;
          const auto exact = static_cast<double>(
              enumerate_index_set(2.0 * t, WeightParams::explicit_list(v)).size());
          const double bound = index_set_size_bound(t, v);
          if (exact <= bound * (1.0 + 1e-12)) ++holds;
        }
    }
    rep.checks.push_back(check("exact-vs-subset-sum-bound", holds == configs && configs >= 200,
                               fmt(holds) + "/" + fmt(configs) + " configurations"));
  }

  {
    int configs = 0, holds = 0;
    for (const double beta : vals)
      for (int d = 1; d <= 6; ++d)
        for (const double s : {8.0, 128.0, 2048.0}) {
          ++configs;
          const auto exact = static_cast<double>(
              enumerate_index_set(s, WeightParams::constant(beta), d).size());
          if (exact <= corollary_bound_constant(beta, d, s) * (1.0 + 1e-12)) ++holds;
        }
    rep.checks.push_back(check("constant-weight-closed-form", holds == configs,
                               fmt(holds) + "/" + fmt(configs) + " configurations"));
  }

  {
    int configs = 0, holds = 0, applicable = 0;
    for (const double c : {1.1, 1.5, 2.0})
      for (const double alpha : {0.5, 1.0, 2.0})
        for (const double s : {8.0, 128.0, 2048.0, 32768.0}) {
          ++configs;
          const WeightParams w = WeightParams::polynomial(c, alpha);
          const auto exact = static_cast<double>(enumerate_index_set(s, w).size());
          bool ok = true;
          const int d = active_dimension(s, w);
          if (d > 0 && d <= 20) {
            std::vector<double> v(static_cast<std::size_t>(d));
            for (int j = 1; j <= d; ++j) v[static_cast<std::size_t>(j) - 1] = w.v(j);
            ok = ok && exact <= index_set_size_bound(s / 2.0, v) * (1.0 + 1e-12);
          }
          if (corollary_polynomial_applicable(c, alpha, s)) {
            ++applicable;
            ok = ok && exact <= corollary_bound_polynomial(c, alpha, s) * (1.0 + 1e-12);
          }
          if (ok) ++holds;
        }
    rep.checks.push_back(check("polynomial-weight-bound-chain", holds == configs,
                               fmt(holds) + "/" + fmt(configs) + " (closed form applicable in " +
                                   fmt(applicable) + ")"));
  }

  {
    int configs = 0, holds = 0;
    for (const double beta : vals)
      for (const double s : {8.0, 128.0, 2048.0, 32768.0}) {
        ++configs;
        const WeightParams w = WeightParams::exponential(beta);
        const auto exact = static_cast<double>(enumerate_index_set(s, w).size());
        bool ok = exact <= corollary_bound_exponential(beta, s) * (1.0 + 1e-12);
        const int d = active_dimension(s, w);
        if (d > 0 && d <= 20) {
          std::vector<double> v(static_cast<std::size_t>(d));
          for (int j = 1; j <= d; ++j) v[static_cast<std::size_t>(j) - 1] = w.v(j);
          ok = ok && exact <= index_set_size_bound(s / 2.0, v) * (1.0 + 1e-12);
        }
        if (ok) ++holds;
      }
    rep.checks.push_back(check("exponential-weight-bound-chain", holds == configs,
                               fmt(holds) + "/" + fmt(configs) + " configurations"));
  }

  {
    RngStream rng(seed, 12);
    int holds = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
      const int k = 1 + static_cast<int>(rng.next_uniform() * 5);
      const double L = uniform_in(rng, 0.5, 20.0);
      std::vector<double> b(static_cast<std::size_t>(k));
      for (auto& x : b) x = uniform_in(rng, 0.5, 3.0);
      if (static_cast<double>(gamma_exact(L, b)) <= gamma_bound(L, b) * (1.0 + 1e-12))
        ++holds;
    }
    rep.checks.push_back(check("lattice-count-vs-bound", holds == trials,
                               fmt(holds) + "/" + fmt(trials) + " random (L, b)"));
  }

  return rep;
}

// ----------------------------------------------------------------- stechkin

SuiteReport suite_stechkin(std::uint64_t seed) {
  SuiteReport rep{"stechkin", {}};
  const int trials = 1000;
  int bound_holds = 0, greedy_dominates = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < trials; ++i) {
    RngStream rng(seed, 100 + static_cast<std::uint64_t>(i));
    WeightedVector x;
    x.values.resize(12);
    x.weights.resize(12);
    double max_w2 = 0.0;
    for (int j = 0; j < 12; ++j) {
      x.values[static_cast<std::size_t>(j)] = gaussian(rng);
      x.weights[static_cast<std::size_t>(j)] = uniform_in(rng, 1.0, 2.0);
      max_w2 = std::max(max_w2, x.weights[static_cast<std::size_t>(j)] *
                                    x.weights[static_cast<std::size_t>(j)]);
    }
    const double s = 2.0 * max_w2 + uniform_in(rng, 0.0, 10.0);
    const double p = 0.5, q = 1.0;
    const STermResult oracle = best_weighted_s_term_oracle(x, s, q);
    const STermResult greedy = quasi_best_s_term(x, s, q);
    const double bound = stechkin_bound(x, p, q, s);
    if (oracle.error <= bound * (1.0 + 1e-12)) ++bound_holds;
    if (greedy.error >= oracle.error * (1.0 - 1e-12)) ++greedy_dominates;
    if (oracle.error > 0.0)
      worst_ratio = std::max(worst_ratio, greedy.error / oracle.error);
  }
  rep.checks.push_back(check("oracle-below-stechkin-bound", bound_holds == trials,
                             fmt(bound_holds) + "/" + fmt(trials)));
  rep.checks.push_back(check("greedy-above-oracle", greedy_dominates == trials,
                             fmt(greedy_dominates) + "/" + fmt(trials) +
                                 ", worst greedy/oracle ratio = " + fmt(worst_ratio)));
  return rep;
}

// --------------------------------------------------------------------- wrip

SuiteReport suite_wrip(std::uint64_t seed) {
  SuiteReport rep{"wrip", {}};

  // Fixed 12-column index set over three dimensions.
  IndexSet set = enumerate_index_set(256.0, WeightParams::explicit_list({1.3, 1.3, 1.3}));
  if (set.size() < 12) throw std::runtime_error("wrip suite: set too small");
  set.indices.resize(12);
  std::vector<double> om(12);
  for (std::size_t k = 0; k < 12; ++k) om[k] = omega(set.indices[k], set.weights);
  const double s_rip = 12.0;

  {
    // Exact isometry: quadrature rows with sqrt-weight scaling in 1D.
    const IndexSet line = enumerate_index_set(2048.0, WeightParams::explicit_list({1.5}));
    const QuadratureRule q = quad_rule(64);
    std::vector<ParamPoint> pts;
    for (double t : q.nodes) pts.push_back({t});
    SamplingMatrix phi = assemble_matrix(pts, line);
    for (int l = 0; l < phi.m; ++l)
      for (int c = 0; c < phi.n; ++c)
        phi.at(l, c) *= std::sqrt(q.weights[static_cast<std::size_t>(l)] * phi.m) /
                        std::sqrt(static_cast<double>(phi.m));
    std::vector<double> lom(line.size());
    for (std::size_t k = 0; k < line.size(); ++k)
      lom[k] = omega(line.indices[k], line.weights);
    const double delta = wrip_constant(phi, lom, 50.0);
    rep.checks.push_back(check("orthonormal-columns-zero-delta", delta <= 1e-10,
                               "delta = " + fmt(delta)));
  }

  {
    const int trials = 100;
    int pass = 0;
    double worst_final = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<ParamPoint> pts(320);
      for (int l = 0; l < 320; ++l) {
        RngStream rng(seed + static_cast<std::uint64_t>(trial) * 1000, static_cast<std::uint64_t>(l));
        pts[static_cast<std::size_t>(l)] = sample_measure(rng, 3);
      }
      double prev = 2.0;
      bool monotone = true;
      double final_delta = 0.0;
      for (const int m : {20, 80, 320}) {
        std::vector<ParamPoint> sub(pts.begin(), pts.begin() + m);
        SamplingMatrix phi = assemble_matrix(sub, set);
        const double inv = 1.0 / std::sqrt(static_cast<double>(m));
        for (double& x : phi.data) x *= inv;
        const double delta = wrip_constant(phi, om, s_rip);
        if (delta > prev + 1e-12) monotone = false;
        prev = delta;
        final_delta = delta;
      }
      worst_final = std::max(worst_final, final_delta);
      if (monotone && final_delta < 1.0 / 3.0) ++pass;
    }
    rep.checks.push_back(check("delta-nonincreasing-and-small", pass >= 95,
                               fmt(pass) + "/100, worst final delta = " + fmt(worst_final)));
  }

  {
    SamplingMatrix phi;
    phi.m = 4;
    phi.n = 3;
    phi.data = {1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1};
    const double delta = wrip_constant(phi, {2.0, 2.0, 2.0}, 1.0); // s < min omega^2
    rep.checks.push_back(check("empty-support-zero-delta", delta == 0.0,
                               "delta = " + fmt(delta)));
  }

  return rep;
}

// ---------------------------------------------------------------------- fem

DiffusionModel manufactured_model() {
  DiffusionModel m;
  m.abar = [](double x) { return 2.0 + std::cos(2.0 * std::numbers::pi * x); };
  // rhs chosen so u(x) = sin(pi x) solves -(a u')' = f.
  m.rhs = [](double x) {
    const double pi = std::numbers::pi;
    return 2.0 * pi * pi * std::sin(2.0 * pi * x) * std::cos(pi * x) +
           (2.0 + std::cos(2.0 * pi * x)) * pi * pi * std::sin(pi * x);
  };
  m.functional.kind = Functional::Kind::WeightedAverage;
  m.functional.g = [](double) { return 1.0; };
  m.r = 1.0;
  m.R = 3.0;
  m.kappa = 0.0;
  return m;
}

SuiteReport suite_fem(std::uint64_t seed) {
  SuiteReport rep{"fem", {}};

  {
    const DiffusionModel m = manufactured_model();
    const double exact = 2.0 / std::numbers::pi; // integral of sin(pi x)
    std::vector<std::pair<double, double>> pts;
    for (int k = 4; k <= 10; ++k) {
      FemDiscretization disc;
      disc.h = std::pow(2.0, -k);
      disc.B = 0;
      const double g = eval_functional(m, fem_solve(m, {}, disc));
      pts.emplace_back(disc.h, std::abs(g - exact));
    }
    const RateFit fit = rate_fit(pts);
    rep.checks.push_back(check("functional-superconvergence-rate",
                               std::abs(fit.exponent - 2.0) <= 0.2,
                               "fitted rate = " + fmt(fit.exponent) + ", r2 = " + fmt(fit.r2)));
  }

  {
    DiffusionModel m;
    m.abar = [](double) { return 1.0; };
    m.rhs = [](double) { return 1.0; };
    m.functional.kind = Functional::Kind::WeightedAverage;
    m.functional.g = [](double) { return 1.0; };
    m.r = 1.0;
    m.R = 1.0;
    m.kappa = 0.0;
    FemDiscretization disc;
    disc.h = 1.0 / 128.0;
    disc.B = 0;
    const FemSolution sol = fem_solve(m, {}, disc);
    const double avg = eval_functional(m, sol);
    m.functional.kind = Functional::Kind::PointEval;
    m.functional.x0 = 0.5;
    const double mid = eval_functional(m, sol);
    const bool ok = std::abs(avg - 1.0 / 12.0) <= 2.0 * disc.h * disc.h &&
                    std::abs(mid - 0.125) <= 2.0 * disc.h * disc.h;
    rep.checks.push_back(check("closed-form-functionals", ok,
                               "avg = " + fmt(avg) + ", mid = " + fmt(mid)));
  }

  {
    const DiffusionModel m = default_model();
    FemDiscretization disc;
    disc.h = 1.0 / 64.0;
    disc.B = m.dim();
    const double cap = 1.0 / (std::numbers::pi * m.r); // |f|_{L2} C_P / r
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      RngStream rng(seed, 200 + static_cast<std::uint64_t>(i));
      const FemSolution sol = fem_solve(m, sample_measure(rng, m.dim()), disc);
      worst = std::max(worst, sol.h1_seminorm);
      if (sol.h1_seminorm > cap) ok = false;
    }
    rep.checks.push_back(check("a-priori-stability", ok,
                               "max |u_h|_{H1} = " + fmt(worst) + " (cap " + fmt(cap) + ")"));
  }

  {
    // Affine-continuous dependence on y: a Lipschitz constant estimated on one
    // batch of pairs is never exceeded (with 50% headroom) on a fresh batch.
    const DiffusionModel m = default_model();
    FemDiscretization disc;
    disc.h = 1.0 / 64.0;
    disc.B = m.dim();
    auto f_of = [&](const ParamPoint& y) {
      return eval_functional(m, fem_solve(m, y, disc));
    };
    double lip = 0.0;
    for (int i = 0; i < 50; ++i) {
      RngStream rng(seed, 400 + static_cast<std::uint64_t>(i));
      const ParamPoint a = sample_measure(rng, m.dim());
      const ParamPoint b = sample_measure(rng, m.dim());
      double dy = 0.0;
      for (int j = 0; j < m.dim(); ++j)
        dy = std::max(dy, std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]));
      if (dy > 0.0) lip = std::max(lip, std::abs(f_of(a) - f_of(b)) / dy);
    }
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      RngStream rng(seed, 500 + static_cast<std::uint64_t>(i));
      const ParamPoint a = sample_measure(rng, m.dim());
      const ParamPoint b = sample_measure(rng, m.dim());
      double dy = 0.0;
      for (int j = 0; j < m.dim(); ++j)
        dy = std::max(dy, std::abs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)]));
      if (dy > 0.0 && std::abs(f_of(a) - f_of(b)) > 1.5 * lip * dy) ok = false;
    }
    rep.checks.push_back(check("lipschitz-in-parameters", ok,
                               "estimated Lipschitz constant = " + fmt(lip)));
  }

  return rep;
}

// ----------------------------------------------------------------- recovery

SuiteReport suite_recovery(std::uint64_t seed) {
  SuiteReport rep{"recovery", {}};

  {
    SamplingMatrix phi;
    phi.m = 3;
    phi.n = 2;
    phi.data = {1, 0, 0, 1, 1, 1};
    RecoveryParams rp;
    const WeightedVector g = solve_weighted_bpdn(phi, {0, 0, 0}, {1, 1}, rp);
    double nrm = 0.0;
    for (double v : g.values) nrm += v * v;
    rep.checks.push_back(check("zero-data-zero-solution", nrm == 0.0,
                               "|g| = " + fmt(std::sqrt(nrm))));
  }

  {
    // Feasibility and minimality vs the planted truth on noisy instances.
    int feasible = 0, minimal = 0;
    const int trials = 25;
    for (int trial = 0; trial < trials; ++trial) {
      const PlantedInstance inst = make_planted_instance(60, 10.0, seed + static_cast<std::uint64_t>(trial));
      const int m = 45;
      std::vector<ParamPoint> pts(static_cast<std::size_t>(m));
      for (int l = 0; l < m; ++l) {
        RngStream rng(seed + 900 + static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(l));
        pts[static_cast<std::size_t>(l)] = sample_measure(rng, inst.dims);
      }
      const SamplingMatrix phi = assemble_matrix(pts, inst.set);
      std::vector<double> b(static_cast<std::size_t>(m), 0.0);
      for (int l = 0; l < m; ++l)
        for (int c = 0; c < phi.n; ++c)
          b[static_cast<std::size_t>(l)] += phi.at(l, c) * inst.coeffs[static_cast<std::size_t>(c)];
      RngStream rng(seed + 901, static_cast<std::uint64_t>(trial));
      std::vector<double> xi(static_cast<std::size_t>(m));
      double xin = 0.0;
      for (auto& v : xi) {
        v = gaussian(rng);
        xin += v * v;
      }
      xin = std::sqrt(xin);
      const double tau = 0.01;
      for (int l = 0; l < m; ++l) b[static_cast<std::size_t>(l)] += tau / xin * xi[static_cast<std::size_t>(l)];

      RecoveryParams rp;
      rp.tau = tau;
      RecoveryStats st;
      const WeightedVector g = solve_weighted_bpdn(phi, b, inst.omega, rp, &st);
      double resid = 0.0;
      for (int l = 0; l < m; ++l) {
        double r = -b[static_cast<std::size_t>(l)];
        for (int c = 0; c < phi.n; ++c) r += phi.at(l, c) * g.values[static_cast<std::size_t>(c)];
        resid += r * r;
      }
      resid = std::sqrt(resid);
      double obj = 0.0, obj_true = 0.0;
      for (int c = 0; c < phi.n; ++c) {
        obj += inst.omega[static_cast<std::size_t>(c)] * std::abs(g.values[static_cast<std::size_t>(c)]);
        obj_true += inst.omega[static_cast<std::size_t>(c)] * std::abs(inst.coeffs[static_cast<std::size_t>(c)]);
      }
      if (resid <= tau * (1.0 + 1e-6) + 1e-9) ++feasible;
      if (obj <= obj_true * (1.0 + 1e-6)) ++minimal; // truth is tau-feasible by construction
    }
    rep.checks.push_back(check("feasible-and-minimal", feasible == trials && minimal == trials,
                               "feasible " + fmt(feasible) + "/" + fmt(trials) +
                                   ", minimal " + fmt(minimal) + "/" + fmt(trials)));
  }

  {
    const PlantedInstance inst = make_planted_instance(40, 8.0, seed + 31);
    const int m = 32;
    std::vector<ParamPoint> pts(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      RngStream rng(seed + 32, static_cast<std::uint64_t>(l));
      pts[static_cast<std::size_t>(l)] = sample_measure(rng, inst.dims);
    }
    const SamplingMatrix phi = assemble_matrix(pts, inst.set);
    std::vector<double> b(static_cast<std::size_t>(m));
    RngStream rng(seed + 33, 0);
    for (auto& v : b) v = gaussian(rng);
    RecoveryParams rp;
    rp.tau = 0.5;
    const WeightedVector g1 = solve_weighted_bpdn(phi, b, inst.omega, rp);
    std::vector<double> b3 = b;
    for (auto& v : b3) v *= 3.0;
    rp.tau = 1.5;
    const WeightedVector g3 = solve_weighted_bpdn(phi, b3, inst.omega, rp);
    double dev = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < g1.size(); ++c) {
      dev = std::max(dev, std::abs(3.0 * g1.values[c] - g3.values[c]));
      scale = std::max(scale, std::abs(g3.values[c]));
    }
    rep.checks.push_back(check("scaling-equivariance", dev <= 1e-5 * std::max(1.0, scale),
                               "max |3 g(b) - g(3b)| = " + fmt(dev)));
  }

  {
    const int trials = 20;
    int hits = 0;
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const PlantedInstance inst = make_planted_instance(60, 10.0, seed + 600 + static_cast<std::uint64_t>(trial));
      const double err = planted_recovery_error(inst, 45, seed + 700 + static_cast<std::uint64_t>(trial));
      worst = std::max(worst, err);
      if (err <= 1e-6) ++hits;
    }
    rep.checks.push_back(check("equality-constrained-exact-recovery", hits >= 19,
                               fmt(hits) + "/" + fmt(trials) + ", worst error = " + fmt(worst)));
  }

  {
    const PlantedInstance inst = make_planted_instance(40, 8.0, seed + 61);
    const int m = 36;
    std::vector<ParamPoint> pts(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      RngStream rng(seed + 62, static_cast<std::uint64_t>(l));
      pts[static_cast<std::size_t>(l)] = sample_measure(rng, inst.dims);
    }
    const SamplingMatrix phi = assemble_matrix(pts, inst.set);
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    for (int l = 0; l < m; ++l)
      for (int c = 0; c < phi.n; ++c)
        b[static_cast<std::size_t>(l)] += phi.at(l, c) * inst.coeffs[static_cast<std::size_t>(c)];
    RecoveryStats st;
    solve_weighted_iht(phi, b, inst.omega, 8.0, 2000, &st);
    rep.checks.push_back(check("hard-thresholding-planted-residual", st.residual < 1e-8,
                               "residual = " + fmt(st.residual)));
  }

  return rep;
}

} // namespace

bool SuiteReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

std::vector<std::string> verify_suite_names() {
  return {"chebyshev", "stechkin", "wrip", "counting", "fem", "recovery"};
}

SuiteReport run_verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "chebyshev") return suite_chebyshev(seed);
  if (suite == "stechkin") return suite_stechkin(seed);
  if (suite == "wrip") return suite_wrip(seed);
  if (suite == "counting") return suite_counting(seed);
  if (suite == "fem") return suite_fem(seed);
  if (suite == "recovery") return suite_recovery(seed);
  throw std::invalid_argument("unknown verify suite '" + suite + "'");
}

PlantedInstance make_planted_instance(int n_columns, double s, std::uint64_t seed) {
  PlantedInstance inst;
  const WeightParams w = WeightParams::polynomial(1.1, 0.75);
  double budget = 8.0;
  IndexSet set = enumerate_index_set(budget, w);
  while (static_cast<int>(set.size()) < n_columns) {
    budget *= 2.0;
    set = enumerate_index_set(budget, w);
  }
  set.indices.resize(static_cast<std::size_t>(n_columns));
  inst.set = std::move(set);
  inst.omega.resize(static_cast<std::size_t>(n_columns));
  inst.dims = 0;
  for (int c = 0; c < n_columns; ++c) {
    inst.omega[static_cast<std::size_t>(c)] =
        omega(inst.set.indices[static_cast<std::size_t>(c)], w);
    inst.dims = std::max(inst.dims, inst.set.indices[static_cast<std::size_t>(c)].max_dim());
  }
  inst.dims = std::max(inst.dims, 1);

  inst.coeffs.assign(static_cast<std::size_t>(n_columns), 0.0);
  RngStream rng(seed, 0);
  double used = 0.0;
  for (int attempt = 0; attempt < 20 * n_columns; ++attempt) {
    const int c = static_cast<int>(rng.next_uniform() * n_columns);
    if (inst.coeffs[static_cast<std::size_t>(c)] != 0.0) continue;
    const double w2 = inst.omega[static_cast<std::size_t>(c)] *
                      inst.omega[static_cast<std::size_t>(c)];
    if (used + w2 > s) continue;
    inst.coeffs[static_cast<std::size_t>(c)] = gaussian(rng);
    used += w2;
  }
  return inst;
}

double planted_recovery_error(const PlantedInstance& inst, int m, std::uint64_t seed) {
  std::vector<ParamPoint> pts(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    RngStream rng(seed, static_cast<std::uint64_t>(l));
    pts[static_cast<std::size_t>(l)] = sample_measure(rng, inst.dims);
  }
  const SamplingMatrix phi = assemble_matrix(pts, inst.set);
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  for (int l = 0; l < m; ++l)
    for (int c = 0; c < phi.n; ++c)
      b[static_cast<std::size_t>(l)] += phi.at(l, c) * inst.coeffs[static_cast<std::size_t>(c)];

  RecoveryParams rp; // tau = 0: equality-constrained program
  WeightedVector g;
  try {
    g = solve_weighted_bpdn(phi, b, inst.omega, rp);
  } catch (const std::exception&) {
    return 1.0; // non-convergence counts as a failed trial
  }
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    num += (g.values[c] - inst.coeffs[c]) * (g.values[c] - inst.coeffs[c]);
    den += inst.coeffs[c] * inst.coeffs[c];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

int oversampled_m(double C, double s, std::size_t n_columns) {
  const double ls = std::log(std::max(s, 2.0));
  const double lN = std::log(std::max(static_cast<double>(n_columns), 2.0));
  return std::max(1, static_cast<int>(std::ceil(C * s * ls * ls * ls * lN)));
}

std::vector<SweepRow> sweep_oversample(const std::vector<double>& constants,
                                       int n_columns, double s, int trials,
                                       std::uint64_t seed) {
  std::vector<SweepRow> rows;
  for (const double C : constants) {
    SweepRow row;
    row.oversample_C = C;
    row.m = oversampled_m(C, s, static_cast<std::size_t>(n_columns));
    row.trials = trials;
    for (int t = 0; t < trials; ++t) {
      const PlantedInstance inst =
          make_planted_instance(n_columns, s, seed + static_cast<std::uint64_t>(t));
      const double err =
          planted_recovery_error(inst, row.m, seed + 5000 + static_cast<std::uint64_t>(t));
      if (err <= 1e-6) ++row.successes;
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace cspg

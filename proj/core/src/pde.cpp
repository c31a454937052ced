#include "cspg/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cspg {

namespace {

// Gauss-Legendre nodes/weights on (-1,1) for orders used in element quadrature.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  switch (n) {
    case 1:
      x = {0.0};
      w = {2.0};
      return;
    case 2:
      x = {-0.5773502691896257, 0.5773502691896257};
      w = {1.0, 1.0};
      return;
    case 3:
      x = {-0.7745966692414834, 0.0, 0.7745966692414834};
      w = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};
      return;
    case 4:
      x = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
           0.8611363115940526};
      w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
           0.3478548451374538};
      return;
    case 5:
      x = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
           0.9061798459386640};
      w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
           0.4786286704993665, 0.2369268850561891};
      return;
    default:
      throw std::invalid_argument("element quadrature order must be 1..5");
  }
}

double refine_extremum(const ScalarField& f, bool want_sup, double tol) {
  double prev = want_sup ? -1e300 : 1e300;
  for (int n = 64; n <= (1 << 22); n *= 2) {
    double ext = want_sup ? -1e300 : 1e300;
    for (int i = 0; i <= n; ++i) {
      // stay strictly inside (0,1) at the ends
      const double x = std::clamp(static_cast<double>(i) / n, 0.5 / n, 1.0 - 0.5 / n);
      const double v = f(x);
      ext = want_sup ? std::max(ext, v) : std::min(ext, v);
    }
    if (n > 64 && std::abs(ext - prev) < tol) return ext;
    prev = ext;
  }
  return prev;
}

} // namespace

double grid_sup(const ScalarField& f, double tol) { return refine_extremum(f, true, tol); }
double grid_inf(const ScalarField& f, double tol) { return refine_extremum(f, false, tol); }

void DiffusionModel::validate(int grid_points) const {
  if (!(r > 0.0) || !(R >= r)) throw std::invalid_argument("need 0 < r <= R");
  if (psis.size() != psi_sup.size())
    throw std::invalid_argument("psi_sup must align with psis");
  double sup_sum = 0.0;
  for (double b : psi_sup) sup_sum += b;
  const double a_inf = grid_inf(abar);
  if (kappa > 0.0 && sup_sum > kappa * a_inf + 1e-12)
    throw std::invalid_argument("sum of psi sup-norms exceeds kappa * inf(abar)");
  for (int i = 0; i <= grid_points; ++i) {
    const double x =
        std::clamp(static_cast<double>(i) / grid_points, 0.5 / grid_points,
                   1.0 - 0.5 / grid_points);
    double s = 0.0;
    for (const auto& psi : psis) s += std::abs(psi(x));
    const double a = abar(x);
    if (a - s < r - 1e-12 || a + s > R + 1e-12) {
      std::ostringstream os;
      os << "ellipticity bracket [" << r << "," << R << "] violated at x = " << x;
      throw std::invalid_argument(os.str());
    }
  }
}

DiffusionModel default_model(int count, double tau) {
  double norm = 0.0;
  for (int j = 1; j <= count; ++j) norm += std::pow(static_cast<double>(j), -tau);
  const double c = 0.9 / norm; // sum of sup norms = 0.9 = kappa * inf(abar) * 0.9

  DiffusionModel m;
  m.abar = [](double) { return 2.0; };
  m.rhs = [](double) { return 1.0; };
  m.functional.kind = Functional::Kind::PointEval;
  m.functional.x0 = 0.5;
  m.r = 0.5;
  m.R = 3.5;
  m.kappa = 0.5;
  for (int j = 1; j <= count; ++j) {
    const double amp = c * std::pow(static_cast<double>(j), -tau);
    m.psis.push_back(
        [amp, j](double x) { return amp * std::sin(j * std::numbers::pi * x); });
    m.psi_sup.push_back(amp);
  }
  return m;
}

int FemDiscretization::n_cells() const {
  const int n = static_cast<int>(std::lround(1.0 / h));
  if (n < 2) throw std::invalid_argument("mesh must have at least 2 cells");
  return n;
}

FemDiscretization discretization_for(const DiffusionModel& model, double epsilon,
                                     double p0, double cal_h) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (p0 <= 0.0 || p0 >= 1.0) throw std::invalid_argument("p0 must lie in (0,1)");
  FemDiscretization disc;
  int n = static_cast<int>(std::ceil(1.0 / (cal_h * std::sqrt(epsilon))));
  n = std::max(n, 2);
  disc.h = 1.0 / n;
  const double bexp = std::pow(epsilon, -p0 / (1.0 - p0));
  disc.B = static_cast<int>(std::min<double>(std::ceil(bexp), model.dim()));
  return disc;
}

double coefficient_eval(const DiffusionModel& model, const ParamPoint& y, int B,
                        double x) {
  double a = model.abar(x);
  const int lim = std::min<int>(B, std::min<int>(model.dim(), static_cast<int>(y.size())));
  for (int j = 1; j <= lim; ++j)
    a += y[static_cast<std::size_t>(j) - 1] * model.psis[static_cast<std::size_t>(j) - 1](x);
  return a;
}

double beta0_upper(const DiffusionModel& model, int j) {
  if (j < 1 || j > model.dim()) return 0.0;
  const double sup = grid_sup([&](double x) {
    return std::abs(model.psis[static_cast<std::size_t>(j) - 1](x));
  });
  return sup / grid_inf(model.abar);
}

WeightedUeaReport check_weighted_uea(const DiffusionModel& model, const WeightParams& w,
                                     double p) {
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("p must lie in (0,1]");
  const double vexp = (2.0 - p) / p;
  WeightedUeaReport rep;
  rep.margin = 1e300;

  // weighted lp-summability term sum
  std::vector<double> terms;
  double lp = 0.0;
  for (int j = 1; j <= model.dim(); ++j) {
    const double t = std::pow(w.v(j), 2.0 - p) *
                     std::pow(model.psi_sup[static_cast<std::size_t>(j) - 1], p);
    terms.push_back(t);
    lp += t;
    if (t < 1e-14 * lp) break;
  }
  rep.lp_sum = lp;
  bool diverging = false;
  if (terms.size() >= 4) {
    diverging = true;
    for (std::size_t k = terms.size() - 3; k < terms.size(); ++k)
      if (terms[k] <= terms[k - 1]) diverging = false;
    if (terms.back() < 1e-10 * lp) diverging = false;
  }

  const int grid = 2048;
  bool pointwise_ok = true;
  for (int i = 1; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    double s = 0.0;
    for (int j = 1; j <= model.dim(); ++j)
      s += std::pow(w.v(j), vexp) *
           std::abs(model.psis[static_cast<std::size_t>(j) - 1](x));
    const double cap = std::min(model.abar(x) - model.r, model.R - model.abar(x));
    const double m = cap - s;
    if (m < rep.margin) {
      rep.margin = m;
      rep.worst_x = x;
    }
    if (m < 0.0) pointwise_ok = false;
  }
  rep.ok = pointwise_ok && !diverging;
  if (!pointwise_ok) {
    std::ostringstream os;
    os << "weighted ellipticity violated at x = " << rep.worst_x
       << " (margin " << rep.margin << ")";
    rep.detail = os.str();
  } else if (diverging) {
    rep.detail = "weighted lp series terms are growing; series diverges";
    rep.ok = false;
  }
  return rep;
}

FemSolution fem_solve(const DiffusionModel& model, const ParamPoint& y,
                      const FemDiscretization& disc) {
  for (double yj : y)
    if (std::abs(yj) > 1.0 + 1e-12)
      throw std::invalid_argument("parameter outside [-1,1] box");
  const int n = disc.n_cells();
  const double h = 1.0 / n;
  std::vector<double> gx, gw;
  gauss_legendre(disc.quad_pts, gx, gw);

  // element integrals of the coefficient and load
  std::vector<double> ke(static_cast<std::size_t>(n), 0.0);
  std::vector<double> load(static_cast<std::size_t>(n) - 1, 0.0);
  for (int e = 0; e < n; ++e) {
    const double xl = e * h;
    double aint = 0.0;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double x = xl + 0.5 * h * (gx[q] + 1.0);
      const double a = coefficient_eval(model, y, disc.B, x);
      if (a <= 0.0) {
        std::ostringstream os;
        os << "ellipticity breach: a(x,y) = " << a << " at quadrature point x = " << x;
        throw std::runtime_error(os.str());
      }
      aint += 0.5 * h * gw[q] * a;
      const double f = model.rhs(x);
      const double lam = (x - xl) / h; // local coordinate in [0,1]
      if (e >= 1) load[static_cast<std::size_t>(e) - 1] += 0.5 * h * gw[q] * f * (1.0 - lam);
      if (e + 1 <= n - 1) load[static_cast<std::size_t>(e)] += 0.5 * h * gw[q] * f * lam;
    }
    ke[static_cast<std::size_t>(e)] = aint / (h * h);
  }

  // tridiagonal SPD system; Thomas algorithm
  const std::size_t m = static_cast<std::size_t>(n) - 1;
  std::vector<double> diag(m), off(m - 1 + (m == 0 ? 1 : 0));
  for (std::size_t i = 0; i < m; ++i) diag[i] = ke[i] + ke[i + 1];
  for (std::size_t i = 0; i + 1 < m; ++i) off[i] = -ke[i + 1];

  std::vector<double> c(m), d(m), u(m);
  c[0] = m > 1 ? off[0] / diag[0] : 0.0;
  d[0] = load[0] / diag[0];
  for (std::size_t i = 1; i < m; ++i) {
    const double denom = diag[i] - off[i - 1] * c[i - 1];
    if (i + 1 < m) c[i] = off[i] / denom;
    d[i] = (load[i] - off[i - 1] * d[i - 1]) / denom;
  }
  u[m - 1] = d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) u[i] = d[i] - c[i] * u[i + 1];

  // residual check, scaled by |A| |u| + |rhs|
  double res2 = 0.0, rhs2 = 0.0, u2 = 0.0, amax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double ri = diag[i] * u[i] - load[i];
    if (i > 0) ri += off[i - 1] * u[i - 1];
    if (i + 1 < m) ri += off[i] * u[i + 1];
    res2 += ri * ri;
    rhs2 += load[i] * load[i];
    u2 += u[i] * u[i];
    amax = std::max(amax, std::abs(diag[i]));
  }
  const double denom_scale = amax * std::sqrt(u2) + std::sqrt(rhs2);
  if (denom_scale > 0.0 && std::sqrt(res2) > 1e-12 * denom_scale)
    throw std::runtime_error("tridiagonal solve residual above tolerance");

  FemSolution sol;
  sol.interior = std::move(u);
  sol.y = y;
  sol.h = h;
  sol.B = disc.B;
  double semi = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double cur = i < m ? sol.interior[i] : 0.0;
    const double du = (cur - prev) / h;
    semi += du * du * h;
    prev = cur;
  }
  sol.h1_seminorm = std::sqrt(semi);
  return sol;
}

double FemSolution::at(double x) const {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const std::size_t n = interior.size() + 1;
  const double t = x * static_cast<double>(n);
  auto cell = static_cast<std::size_t>(t);
  if (cell >= n) cell = n - 1;
  const double lam = t - static_cast<double>(cell);
  const double ul = cell == 0 ? 0.0 : interior[cell - 1];
  const double ur = cell == n - 1 ? 0.0 : interior[cell];
  return ul + lam * (ur - ul);
}

double eval_functional(const DiffusionModel& model, const FemSolution& sol) {
  switch (model.functional.kind) {
    case Functional::Kind::PointEval: {
      const double x0 = model.functional.x0;
      if (x0 <= 0.0 || x0 >= 1.0)
        throw std::invalid_argument("evaluation point outside (0,1)");
      return sol.at(x0);
    }
    case Functional::Kind::WeightedAverage: {
      const std::size_t n = sol.interior.size() + 1;
      const double h = 1.0 / static_cast<double>(n);
      std::vector<double> gx, gw;
      gauss_legendre(3, gx, gw);
      double acc = 0.0;
      for (std::size_t e = 0; e < n; ++e) {
        const double xl = static_cast<double>(e) * h;
        for (std::size_t q = 0; q < gx.size(); ++q) {
          const double x = xl + 0.5 * h * (gx[q] + 1.0);
          acc += 0.5 * h * gw[q] * model.functional.g(x) * sol.at(x);
        }
      }
      return acc;
    }
  }
  return 0.0;
}

double truncation_tail_bound(const DiffusionModel& model, int J, double p0) {
  if (p0 >= 1.0) throw std::invalid_argument("tail bound requires p0 < 1");
  if (p0 <= 0.0) throw std::invalid_argument("p0 must be positive");
  if (J < 1) throw std::invalid_argument("J must be >= 1");
  double sum_p = 0.0;
  const double a_inf = grid_inf(model.abar);
  for (int j = 1; j <= model.dim(); ++j)
    sum_p += std::pow(model.psi_sup[static_cast<std::size_t>(j) - 1] / a_inf, p0);
  const double rate = 1.0 / p0 - 1.0;
  return std::min(1.0 / rate, 1.0) * std::pow(sum_p, 1.0 / p0) * std::pow(J, -rate);
}

} // namespace cspg

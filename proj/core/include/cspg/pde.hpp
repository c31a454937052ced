#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cspg/chebyshev.hpp"

namespace cspg {

using ScalarField = std::function<double(double)>;

/// Quantity of interest applied to the solution.
struct Functional {
  enum class Kind { PointEval, WeightedAverage };
  Kind kind = Kind::PointEval;
  double x0 = 0.5;      // PointEval
  ScalarField g;        // WeightedAverage: integral of g * u
};

/// Affine-parametric diffusion problem -(a(x,y) u')' = f on (0,1), u(0)=u(1)=0,
/// a(x,y) = abar(x) + sum_j y_j psi_j(x).
struct DiffusionModel {
  ScalarField abar;
  std::vector<ScalarField> psis;
  std::vector<double> psi_sup; // declared sup-norm bounds, aligned with psis
  ScalarField rhs;
  Functional functional;
  double r = 0.0;     // declared ellipticity floor
  double R = 0.0;     // declared ellipticity ceiling
  double kappa = 0.0; // declared bound in sum ||psi_j|| <= kappa * inf abar

  int dim() const { return static_cast<int>(psis.size()); }
  void validate(int grid_points = 1024) const;
};

/// The default test model: abar = 2, psi_j = c j^-tau sin(j pi x) with
/// sum of sup norms = 0.9, f = 1, G = point evaluation at 0.5.
DiffusionModel default_model(int count = 32, double tau = 3.0);

struct FemDiscretization {
  double h = 0.0;    // uniform mesh width, n_cells = round(1/h) >= 2
  int B = 0;         // dimension truncation level
  int quad_pts = 3;  // per-element Gauss order for coefficient integration

  int n_cells() const;
};

/// Map a target sample accuracy to (h, B): h = cal_h * sqrt(eps),
/// B = ceil(eps^{-p0/(1-p0)}) capped at the model's expansion length.
FemDiscretization discretization_for(const DiffusionModel& model, double epsilon,
                                     double p0 = 0.5, double cal_h = 1.0);

struct FemSolution {
  std::vector<double> interior; // nodal values at x_i = i*h, i = 1..n-1
  ParamPoint y;
  double h = 0.0;
  int B = 0;
  double h1_seminorm = 0.0;

  double at(double x) const; // piecewise-linear interpolation
};

/// Truncated coefficient abar(x) + sum_{j<=B} y_j psi_j(x).
double coefficient_eval(const DiffusionModel& model, const ParamPoint& y, int B, double x);

/// Computable bound ||psi_j||_inf / inf(abar) on beta_{0,j}.
double beta0_upper(const DiffusionModel& model, int j);

struct WeightedUeaReport {
  bool ok = false;
  double margin = 0.0;
  double worst_x = 0.0;
  double lp_sum = 0.0;
  std::string detail;
};

/// Checks the weighted ellipticity and weighted summability conditions
/// on a validation grid for exponent p in (0,1].
WeightedUeaReport check_weighted_uea(const DiffusionModel& model, const WeightParams& w,
                                     double p);

/// P1 Galerkin solve of the dimension-truncated problem at parameter y.
FemSolution fem_solve(const DiffusionModel& model, const ParamPoint& y,
                      const FemDiscretization& disc);

double eval_functional(const DiffusionModel& model, const FemSolution& sol);

/// Upper bound on sum_{j > J} beta_{0,j} from p0-summability of the beta_{0,j}.
double truncation_tail_bound(const DiffusionModel& model, int J, double p0);

/// Grid sup / inf with dyadic refinement until change < 1e-6.
double grid_sup(const ScalarField& f, double tol = 1e-6);
double grid_inf(const ScalarField& f, double tol = 1e-6);

} // namespace cspg

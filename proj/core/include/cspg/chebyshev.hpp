#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cspg/multiindex.hpp"

namespace cspg {

/// Point in the parameter box [-1,1]^dims; components beyond dims are 0.
using ParamPoint = std::vector<double>;

/// Counter-based stream RNG: draws are a pure function of (seed, stream, counter),
/// so parallel schedules cannot change the sample sequence.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform(); // [0, 1)

private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

/// L2(sigma)-normalized Chebyshev polynomial: 1 for j = 0, sqrt(2) cos(j arccos t) else.
double cheb1d(int j, double t);

/// Product over supp(nu) of cheb1d(nu_j, y_j).
double tensor_cheb(const MultiIndex& nu, const ParamPoint& y);

/// One draw from the product arcsine measure on [-1,1]^dims.
ParamPoint sample_measure(RngStream& rng, int dims);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Chebyshev rule: exact for polynomial degree <= 2n-1 against
/// dt / (pi sqrt(1-t^2)).
QuadratureRule quad_rule(int n);

/// Tensor-product Gauss-Chebyshev approximation of integral F * T_nu d(eta)
/// over [-1,1]^dims. Enforces n^dims <= 1e7.
double reference_coefficient(const std::function<double(const ParamPoint&)>& F,
                             const MultiIndex& nu, int n, int dims);

} // namespace cspg

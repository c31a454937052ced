#include "cspg/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cspg {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

// PCG-XSH-RR with stream selection; state seeded through splitmix64.
RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  state_ = splitmix64(s);
  std::uint64_t t = stream ^ 0xda3e39cb94b95bdbULL;
  inc_ = (splitmix64(t) << 1u) | 1u;
  state_ += inc_;
  next_u64();
}

std::uint64_t RngStream::next_u64() {
  auto next_u32 = [this]() -> std::uint32_t {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<unsigned>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  };
  // two 32-bit outputs per 64-bit draw
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double cheb1d(int j, double t) {
  if (j < 0) throw std::invalid_argument("cheb1d: negative degree");
  if (std::abs(t) > 1.0) throw std::domain_error("cheb1d: |t| > 1");
  if (j == 0) return 1.0;
  // three-term recurrence on cos(j arccos t)
  double cm1 = 1.0, c = t;
  for (int k = 2; k <= j; ++k) {
    const double cn = 2.0 * t * c - cm1;
    cm1 = c;
    c = cn;
  }
  return std::numbers::sqrt2 * c;
}

double tensor_cheb(const MultiIndex& nu, const ParamPoint& y) {
  double prod = 1.0;
  for (const auto& [j, e] : nu.entries()) {
    if (j > static_cast<int>(y.size()))
      throw std::invalid_argument("tensor_cheb: index support exceeds point dimension");
    prod *= cheb1d(e, y[static_cast<std::size_t>(j) - 1]);
  }
  return prod;
}

ParamPoint sample_measure(RngStream& rng, int dims) {
  if (dims < 1) throw std::invalid_argument("sample_measure: dims must be >= 1");
  ParamPoint y(static_cast<std::size_t>(dims));
  for (auto& yj : y) yj = std::cos(std::numbers::pi * rng.next_uniform());
  return y;
}

QuadratureRule quad_rule(int n) {
  if (n < 1) throw std::invalid_argument("quad_rule: n must be >= 1");
  QuadratureRule q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  for (int k = 1; k <= n; ++k)
    q.nodes[static_cast<std::size_t>(k) - 1] =
        std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
  return q;
}

double reference_coefficient(const std::function<double(const ParamPoint&)>& F,
                             const MultiIndex& nu, int n, int dims) {
  if (dims < 1) throw std::invalid_argument("reference_coefficient: dims must be >= 1");
  if (nu.max_dim() > dims)
    throw std::invalid_argument("reference_coefficient: index support exceeds dims");
  double total_pts = 1.0;
  for (int k = 0; k < dims; ++k) total_pts *= n;
  if (total_pts > 1e7)
    throw std::runtime_error(
        "reference_coefficient: tensor quadrature budget exceeded; use a Monte Carlo estimator");

  const QuadratureRule q = quad_rule(n);
  const auto nd = static_cast<std::size_t>(dims);
  std::vector<std::size_t> idx(nd, 0);
  ParamPoint y(nd);
  double acc = 0.0;
  while (true) {
    double wgt = 1.0;
    for (std::size_t k = 0; k < nd; ++k) {
      y[k] = q.nodes[idx[k]];
      wgt *= q.weights[idx[k]];
    }
    acc += wgt * F(y) * tensor_cheb(nu, y);
    std::size_t k = 0;
    for (; k < nd; ++k) {
      if (++idx[k] < q.nodes.size()) break;
      idx[k] = 0;
    }
    if (k == nd) break;
  }
  return acc;
}

} // namespace cspg

#include "cspg/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace cspg {

namespace {
// Absolute slack on log2-space membership tests; boundary indices included.
constexpr double kLogSlack = 1e-12;
} // namespace

MultiIndex::MultiIndex(const std::vector<int>& dense) {
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] < 0) throw std::invalid_argument("negative exponent");
    if (dense[i] > 0) entries_[static_cast<int>(i) + 1] = dense[i];
  }
}

void MultiIndex::set(int dim, int exponent) {
  if (dim < 1) throw std::invalid_argument("dimension index must be >= 1");
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  if (exponent == 0)
    entries_.erase(dim);
  else
    entries_[dim] = exponent;
}

int MultiIndex::get(int dim) const {
  auto it = entries_.find(dim);
  return it == entries_.end() ? 0 : it->second;
}

long MultiIndex::order1() const {
  long s = 0;
  for (const auto& [j, nu] : entries_) s += nu;
  return s;
}

bool MultiIndex::graded_less(const MultiIndex& a, const MultiIndex& b) {
  const long la = a.order1(), lb = b.order1();
  if (la != lb) return la < lb;
  const int d = std::max(a.max_dim(), b.max_dim());
  for (int j = 1; j <= d; ++j) {
    const int xa = a.get(j), xb = b.get(j);
    if (xa != xb) return xa > xb; // larger leading exponent first
  }
  return false;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& [j, nu] : entries_) {
    if (!first) os << ',';
    os << j << ':' << nu;
    first = false;
  }
  os << ')';
  return os.str();
}

WeightParams::WeightParams(Kind k, double p1, double p2, std::vector<double> list, double theta)
    : kind_(k), p1_(p1), p2_(p2), list_(std::move(list)), theta_(theta) {
  if (theta_ < 1.0) throw std::invalid_argument("theta must be >= 1");
}

WeightParams WeightParams::constant(double beta, double theta) {
  if (beta < 1.0) throw std::invalid_argument("constant weight beta must be >= 1");
  return WeightParams(Kind::Constant, beta, 0.0, {}, theta);
}

WeightParams WeightParams::polynomial(double c, double alpha, double theta) {
  if (c < 1.0) throw std::invalid_argument("polynomial weight c must be >= 1");
  if (alpha < 0.0) throw std::invalid_argument("polynomial weight alpha must be >= 0");
  return WeightParams(Kind::Polynomial, c, alpha, {}, theta);
}

WeightParams WeightParams::exponential(double beta, double theta) {
  if (beta < 1.0) throw std::invalid_argument("exponential weight beta must be >= 1");
  return WeightParams(Kind::Exponential, beta, 0.0, {}, theta);
}

WeightParams WeightParams::explicit_list(std::vector<double> v, double theta) {
  for (double x : v)
    if (x < 1.0) throw std::invalid_argument("explicit weights must be >= 1");
  return WeightParams(Kind::Explicit, 0.0, 0.0, std::move(v), theta);
}

double WeightParams::v(int j) const {
  if (j < 1) throw std::invalid_argument("dimension index must be >= 1");
  switch (kind_) {
    case Kind::Constant: return p1_;
    case Kind::Polynomial: return p1_ * std::pow(static_cast<double>(j), p2_);
    case Kind::Exponential: return std::pow(p1_, static_cast<double>(j));
    case Kind::Explicit:
      if (j > static_cast<int>(list_.size()))
        return std::numeric_limits<double>::infinity();
      return list_[static_cast<std::size_t>(j) - 1];
  }
  return 1.0;
}

double WeightParams::log2_v(int j) const {
  if (kind_ == Kind::Exponential) return static_cast<double>(j) * std::log2(p1_);
  return std::log2(v(j));
}

double log2_omega(const MultiIndex& nu, const WeightParams& w) {
  double lg = nu.order0() * std::log2(w.theta());
  for (const auto& [j, e] : nu.entries()) lg += e * w.log2_v(j);
  return lg;
}

double omega(const MultiIndex& nu, const WeightParams& w) {
  const double lg = log2_omega(nu, w);
  if (lg > 1023.0) throw std::overflow_error("weight overflow");
  return std::exp2(lg);
}

int IndexSet::active_dim() const {
  int d = 0;
  for (const auto& nu : indices) d = std::max(d, nu.max_dim());
  return d;
}

int active_dimension(double s, const WeightParams& w) {
  if (w.kind() == WeightParams::Kind::Constant ||
      (w.kind() == WeightParams::Kind::Polynomial && w.alpha() == 0.0))
    throw std::invalid_argument("active_dimension requires a monotone weight kind");
  const double thresh = std::sqrt(s / 4.0);
  if (thresh < 1.0) return 0;
  if (w.kind() == WeightParams::Kind::Explicit) {
    int d = 0;
    for (int j = 1; j <= w.explicit_size(); ++j)
      if (w.v(j) <= thresh) d = j;
    return d;
  }
  // v_j nondecreasing: scan until first violation.
  int d = 0;
  for (int j = 1;; ++j) {
    if (w.v(j) <= thresh)
      d = j;
    else
      break;
  }
  return d;
}

namespace {

void enumerate_dfs(int dim, int max_dim, double used, double budget,
                   const WeightParams& w, MultiIndex& cur,
                   std::vector<MultiIndex>& out) {
  out.push_back(cur);
  const double log2_theta2 = 2.0 * std::log2(w.theta());
  for (int j = dim; j <= max_dim; ++j) {
    const double lv2 = 2.0 * w.log2_v(j);
    if (!std::isfinite(lv2)) continue;
    double cost = used + log2_theta2; // activating dimension j
    int e = 1;
    while (cost + e * lv2 <= budget + kLogSlack) {
      if (lv2 <= 0.0)
        throw std::runtime_error("unbounded index set");
      cur.set(j, e);
      enumerate_dfs(j + 1, max_dim, cost + e * lv2, budget, w, cur, out);
      cur.set(j, 0);
      ++e;
    }
  }
}

} // namespace

IndexSet enumerate_index_set(double s, const WeightParams& w,
                             std::optional<int> max_dim) {
  if (s < 2.0) throw std::invalid_argument("sparsity budget s must be >= 2");
  int d;
  if (w.kind() == WeightParams::Kind::Constant ||
      (w.kind() == WeightParams::Kind::Polynomial && w.alpha() == 0.0)) {
    if (!max_dim) throw std::runtime_error("unbounded index set");
    d = *max_dim;
  } else if (max_dim) {
    d = *max_dim;
  } else {
    d = active_dimension(s, w);
  }

  const double budget = std::log2(s / 2.0);
  MultiIndex cur;
  std::vector<MultiIndex> out;
  enumerate_dfs(1, d, 0.0, budget, w, cur, out);
  std::sort(out.begin(), out.end(), MultiIndex::graded_less);

  IndexSet set;
  set.indices = std::move(out);
  set.sparsity_budget = s;
  set.weights = w;
  return set;
}

std::uint64_t gamma_exact(double L, const std::vector<double>& b) {
  if (b.empty()) throw std::invalid_argument("gamma_exact requires k >= 1");
  for (double x : b)
    if (x <= 0.0) throw std::invalid_argument("gamma_exact requires positive b");
  const std::size_t k = b.size();
  if (k == 1) {
    const double q = L / b[0];
    return q < 1.0 ? 0 : static_cast<std::uint64_t>(std::floor(q + kLogSlack));
  }
  std::vector<double> head(b.begin(), b.end() - 1);
  const double bk = b.back();
  std::uint64_t total = 0;
  const auto top = static_cast<long>(std::floor(L / bk + kLogSlack));
  for (long e = 1; e <= top; ++e) total += gamma_exact(L - bk * e, head);
  return total;
}

double gamma_bound(double L, const std::vector<double>& b) {
  double val = 1.0;
  double kfac = 1.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    val *= L / b[i];
    kfac *= static_cast<double>(i + 1);
  }
  return std::max(val / kfac, 0.0);
}

namespace {

// Enumerate subsets S of the sorted coefficients a with sum_{j in S} a_j <= A - |S|,
// accumulating prod 1/a_j into acc[|S|].
void subset_dfs(const std::vector<double>& a, std::size_t start, int k, double sum,
                double prod_inv, double A, std::vector<double>& acc) {
  for (std::size_t i = start; i < a.size(); ++i) {
    if (sum + a[i] > A - (k + 1) + kLogSlack) break; // sorted ascending
    acc[static_cast<std::size_t>(k) + 1] += prod_inv / a[i];
    subset_dfs(a, i + 1, k + 1, sum + a[i], prod_inv / a[i], A, acc);
  }
}

} // namespace

double index_set_size_bound(double t, const std::vector<double>& v) {
  if (v.size() > 20)
    throw std::invalid_argument(
        "exact subset enumeration limited to 20 dimensions; use a corollary bound");
  if (t < 1.0) throw std::invalid_argument("threshold t must be >= 1");
  std::vector<double> a;
  a.reserve(v.size());
  for (double vj : v) {
    if (vj <= 1.0) throw std::invalid_argument("size bound requires v_j > 1");
    a.push_back(2.0 * std::log2(vj));
  }
  std::sort(a.begin(), a.end());
  const double A = std::log2(t);
  const int d = static_cast<int>(a.size());
  const int kmax = std::min(d, static_cast<int>(std::floor(A)));

  std::vector<double> acc(static_cast<std::size_t>(d) + 1, 0.0);
  subset_dfs(a, 0, 0, 0.0, 1.0, A, acc);

  double bound = 1.0;
  double kfac = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    kfac *= k;
    bound += std::pow(A - k, k) / kfac * acc[static_cast<std::size_t>(k)];
  }
  return bound;
}

double corollary_bound_constant(double beta, int d, double s) {
  if (beta <= 1.0) throw std::invalid_argument("constant bound requires beta > 1");
  if (d < 1) throw std::invalid_argument("constant bound requires d >= 1");
  if (s < 1.0) throw std::invalid_argument("constant bound requires s >= 1");
  const double lb2 = std::log2(beta * beta);
  const double crit = std::log2(s / 2.0) / std::log2(2.0 * beta * beta);
  if (d <= crit)
    return std::pow(std::log2(beta * beta * s / 2.0) / lb2, d);
  return std::pow((1.0 + 1.0 / lb2) * std::numbers::e * d, crit);
}

namespace {
constexpr double kD1 = 1.1067; // Stirling constant from the size-bound derivation

// Largest k with 2*alpha*log2(k!) <= A - k*(1 + 2*log2(c)).
int poly_kmax(double c, double alpha, double A) {
  int K = 0;
  double log2_kfac = 0.0;
  for (int k = 1; k <= 4096; ++k) {
    log2_kfac += std::log2(static_cast<double>(k));
    if (2.0 * alpha * log2_kfac <= A - k * (1.0 + 2.0 * std::log2(c)))
      K = k;
    else
      break;
  }
  return K;
}
} // namespace

bool corollary_polynomial_applicable(double c, double alpha, double s) {
  if (c <= 1.0 || alpha <= 0.0 || s < 2.0) return false;
  const double A = std::log2(s / 2.0);
  if (A <= 1.0) return false;
  if (kD1 * A <= 1.0) return false;
  return poly_kmax(c, alpha, A) >= 4;
}

double corollary_bound_polynomial(double c, double alpha, double s) {
  if (c <= 1.0) throw std::invalid_argument("polynomial bound requires c > 1");
  if (alpha <= 0.0) throw std::invalid_argument("polynomial bound requires alpha > 0");
  if (s < 2.0) throw std::invalid_argument("polynomial bound requires s >= 2");
  const double A = std::log2(s / 2.0);
  const double e2 = std::numbers::e * std::numbers::e;
  const double term1 = 1.0 + alpha / std::log2(c);
  const double term2 =
      std::sqrt((1.0 + alpha * std::log2(kD1 * A)) / (2.0 * std::numbers::pi * A));
  const double d_bound = std::pow(s / (4.0 * c), 1.0 / (2.0 * alpha));
  const double base = e2 * alpha * d_bound / (2.0 * A) *
                      (std::log2(std::pow(2.0, 1.0 / alpha) * kD1 * A) /
                       std::log2(std::pow(2.0, alpha) * c));
  const double expo = A / std::log2(std::pow(2.0, alpha + 1.0) * c);
  return term1 * term2 * std::pow(base, expo);
}

double corollary_bound_exponential(double beta, double s) {
  if (beta <= 1.0) throw std::invalid_argument("exponential bound requires beta > 1");
  if (s <= 2.0) throw std::invalid_argument("exponential bound requires s > 2");
  const double g = std::log2(s / 2.0) / std::log2(beta);
  const double rg = std::sqrt(g);
  const double e3 = std::exp(3.0);
  return 1.0 + std::pow(e3 * rg, rg) / (2.0 * std::numbers::pi * rg);
}

std::string IndexSet::to_json() const {
  nlohmann::json j;
  j["s"] = sparsity_budget;
  j["theta"] = weights.theta();
  switch (weights.kind()) {
    case WeightParams::Kind::Constant:
      j["weight_kind"] = "constant";
      j["params"] = {{"beta", weights.beta()}};
      break;
    case WeightParams::Kind::Polynomial:
      j["weight_kind"] = "polynomial";
      j["params"] = {{"c", weights.c()}, {"alpha", weights.alpha()}};
      break;
    case WeightParams::Kind::Exponential:
      j["weight_kind"] = "exponential";
      j["params"] = {{"beta", weights.beta()}};
      break;
    case WeightParams::Kind::Explicit:
      j["weight_kind"] = "explicit";
      j["params"] = {{"v", weights.list()}};
      break;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& nu : indices) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [dim, e] : nu.entries()) pairs.push_back({dim, e});
    arr.push_back(pairs);
  }
  j["indices"] = std::move(arr);
  return j.dump(2);
}

IndexSet IndexSet::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("weight_kind");
  const double theta = j.at("theta");
  const auto& p = j.at("params");
  WeightParams w = WeightParams::constant(1.0);
  if (kind == "constant")
    w = WeightParams::constant(p.at("beta"), theta);
  else if (kind == "polynomial")
    w = WeightParams::polynomial(p.at("c"), p.at("alpha"), theta);
  else if (kind == "exponential")
    w = WeightParams::exponential(p.at("beta"), theta);
  else if (kind == "explicit")
    w = WeightParams::explicit_list(p.at("v").get<std::vector<double>>(), theta);
  else
    throw std::runtime_error("unknown weight kind: " + kind);

  IndexSet set;
  set.sparsity_budget = j.at("s");
  set.weights = w;
  for (const auto& pairs : j.at("indices")) {
    MultiIndex nu;
    for (const auto& pr : pairs) nu.set(pr.at(0), pr.at(1));
    set.indices.push_back(std::move(nu));
  }
  return set;
}

} // namespace cspg

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cspg {

/// Finitely supported multi-index: dimension j (1-based) -> exponent nu_j >= 1.
/// Zero exponents are never stored.
class MultiIndex {
public:
  MultiIndex() = default;

  // Dense constructor; zeros are dropped.
  explicit MultiIndex(const std::vector<int>& dense);

  void set(int dim, int exponent);
  int get(int dim) const;

  int order0() const { return static_cast<int>(entries_.size()); } // ||nu||_0
  long order1() const;                                             // ||nu||_1
  int max_dim() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }
  bool is_zero() const { return entries_.empty(); }

  const std::map<int, int>& entries() const { return entries_; }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
  bool operator!=(const MultiIndex& o) const { return !(*this == o); }

  // Graded order: by ||nu||_1, then lexicographic on the dense prefix.
  static bool graded_less(const MultiIndex& a, const MultiIndex& b);

  std::string to_string() const;

private:
  std::map<int, int> entries_;
};

/// Generator for the per-dimension weights v_j (all >= 1) and the factor theta.
class WeightParams {
public:
  enum class Kind { Constant, Polynomial, Exponential, Explicit };

  static WeightParams constant(double beta, double theta = kDefaultTheta);
  static WeightParams polynomial(double c, double alpha, double theta = kDefaultTheta);
  static WeightParams exponential(double beta, double theta = kDefaultTheta);
  static WeightParams explicit_list(std::vector<double> v, double theta = kDefaultTheta);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  double beta() const { return p1_; }
  double c() const { return p1_; }
  double alpha() const { return p2_; }
  const std::vector<double>& list() const { return list_; }

  // v_j for 1-based j. Explicit lists are infinite beyond their length
  // (dimensions past the list never enter an index set).
  double v(int j) const;
  double log2_v(int j) const;
  bool finite_dim() const { return kind_ == Kind::Explicit; }
  int explicit_size() const { return static_cast<int>(list_.size()); }

  static constexpr double kDefaultTheta = 1.4142135623730951; // sqrt(2)

private:
  WeightParams(Kind k, double p1, double p2, std::vector<double> list, double theta);

  Kind kind_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<double> list_;
  double theta_;
};

/// log2 of omega_nu = theta^{||nu||_0} * prod v_j^{nu_j}.
double log2_omega(const MultiIndex& nu, const WeightParams& w);

/// omega_nu itself; throws on overflow of the product.
double omega(const MultiIndex& nu, const WeightParams& w);

/// Candidate index set {nu : omega_nu^2 <= s/2}, in graded-lex order.
struct IndexSet {
  std::vector<MultiIndex> indices;
  double sparsity_budget = 0.0;
  WeightParams weights = WeightParams::constant(1.0);

  std::size_t size() const { return indices.size(); }
  int active_dim() const;

  std::string to_json() const;
  static IndexSet from_json(const std::string& text);
};

/// Largest j with v_j <= sqrt(s/4); 0 if none. Requires a monotone kind.
int active_dimension(double s, const WeightParams& w);

/// Enumerates {nu : omega_nu^2 <= s/2}. For constant weights a maximum
/// dimension d must be supplied. Throws "unbounded index set" when infinite.
IndexSet enumerate_index_set(double s, const WeightParams& w,
                             std::optional<int> max_dim = std::nullopt);

/// Exact count of {nu in N^k : sum b_j nu_j <= L} (all components >= 1).
std::uint64_t gamma_exact(double L, const std::vector<double>& b);

/// L^k / (k! prod b_j).
double gamma_bound(double L, const std::vector<double>& b);

/// Exact-subset-sum evaluation of the combinatorial size estimate for the
/// candidate set with finite weights v (all > 1) and threshold t = s/2.
/// Requires v.size() <= 20.
double index_set_size_bound(double t, const std::vector<double>& v);

/// Closed-form size bounds for the three standard weight families.
double corollary_bound_constant(double beta, int d, double s);
double corollary_bound_polynomial(double c, double alpha, double s);
double corollary_bound_exponential(double beta, double s);

/// True when the closed-form polynomial bound's derivation applies at this
/// (c, alpha, s); below the threshold the chain of estimates is not valid.
bool corollary_polynomial_applicable(double c, double alpha, double s);

} // namespace cspg

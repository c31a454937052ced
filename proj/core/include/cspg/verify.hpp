#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspg/multiindex.hpp"
#include "cspg/recovery.hpp"

namespace cspg {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail; // measured values, for the report
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

/// Named property suites: chebyshev, stechkin, wrip, counting, fem, recovery.
std::vector<std::string> verify_suite_names();
SuiteReport run_verify_suite(const std::string& suite, std::uint64_t seed);

/// Synthetic exact-recovery instance on N Chebyshev columns: an index set of
/// size N, its weights, and a planted vector of weighted sparsity <= s.
struct PlantedInstance {
  IndexSet set;
  std::vector<double> omega;
  std::vector<double> coeffs;
  int dims = 0;
};
PlantedInstance make_planted_instance(int n_columns, double s, std::uint64_t seed);

/// One recovery trial at sample count m: draws points, assembles the matrix,
/// solves equality-constrained weighted BPDN, returns the relative l2 error.
double planted_recovery_error(const PlantedInstance& inst, int m, std::uint64_t seed);

/// Sample count of the oversampling rule m = ceil(C s ln^3(max(s,2)) ln(max(N,2))).
int oversampled_m(double C, double s, std::size_t n_columns);

/// Oversampling constant pinned from a phase-transition sweep (N = 200
/// columns, weighted sparsity 20, equality-constrained recovery): success in
/// 100/100 seeded trials from C = 0.03 upward; 0.04 keeps a margin while
/// staying well inside the compressive regime (m = 114 < N).
inline constexpr double kPinnedOversampleC = 0.04;

struct SweepRow {
  double oversample_C = 0.0;
  int m = 0;
  int trials = 0;
  int successes = 0; // relative error <= 1e-6
};

/// Phase-transition sweep over oversampling constants for the synthetic
/// exact-recovery setup (N columns, weighted sparsity s).
std::vector<SweepRow> sweep_oversample(const std::vector<double>& constants,
                                       int n_columns, double s, int trials,
                                       std::uint64_t seed);

} // namespace cspg

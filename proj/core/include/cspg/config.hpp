#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cspg/multiindex.hpp"
#include "cspg/pde.hpp"

namespace cspg {

/// Parsed experiment configuration (key = value lines, '#' comments).
/// Unknown keys are rejected; all randomness comes from explicit seeds.
struct RunConfig {
  // model
  double model_abar = 2.0;           // constant nominal coefficient
  double model_psi_c = 0.0;          // 0 = use the default-model normalization
  double model_psi_tau = 3.0;
  int model_count = 32;
  double model_rhs = 1.0;            // constant right-hand side
  std::string functional = "point:0.5"; // "point:X0" or "average"
  std::optional<double> model_r, model_R, model_kappa;

  // weights
  std::string weight_kind = "polynomial"; // constant|polynomial|exponential|explicit
  double weight_beta = 2.0;
  double weight_c = 1.15;
  double weight_alpha = 1.5;
  double weight_theta = WeightParams::kDefaultTheta;
  std::vector<double> weight_list;
  std::optional<int> weight_max_dim; // required for constant weights

  // experiment
  std::vector<double> sparsities = {8, 16, 32, 64};
  double oversample_c = 1.0;
  double epsilon = 1e-4;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t test_seed = 0;
  bool test_seed_set = false;
  int n_test = 200;
  std::string recovery = "bpdn"; // bpdn|iht
  std::string out_dir = ".";
  int workers = 1;

  DiffusionModel build_model() const;
  WeightParams build_weights() const;
  void validate() const; // throws std::invalid_argument naming the offender
};

/// Parses the key = value format; throws std::invalid_argument naming any
/// unknown key, malformed line, or out-of-range value.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace cspg

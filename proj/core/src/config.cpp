#include "cspg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cspg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + v + "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: key '" + key + "' has trailing characters in '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x))
    throw std::invalid_argument("config: key '" + key + "' must be an integer");
  return static_cast<long long>(x);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config: key '" + key + "' has an empty list entry");
    out.push_back(parse_double(key, item));
  }
  if (out.empty())
    throw std::invalid_argument("config: key '" + key + "' has an empty list");
  return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not of the form key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " has an empty key or value");

    if (key == "model.abar") cfg.model_abar = parse_double(key, val);
    else if (key == "model.psi.c") cfg.model_psi_c = parse_double(key, val);
    else if (key == "model.psi.tau") cfg.model_psi_tau = parse_double(key, val);
    else if (key == "model.psi.count") cfg.model_count = static_cast<int>(parse_int(key, val));
    else if (key == "model.rhs") cfg.model_rhs = parse_double(key, val);
    else if (key == "model.functional") cfg.functional = val;
    else if (key == "model.r") cfg.model_r = parse_double(key, val);
    else if (key == "model.R") cfg.model_R = parse_double(key, val);
    else if (key == "model.kappa") cfg.model_kappa = parse_double(key, val);
    else if (key == "weights.kind") cfg.weight_kind = val;
    else if (key == "weights.beta") cfg.weight_beta = parse_double(key, val);
    else if (key == "weights.c") cfg.weight_c = parse_double(key, val);
    else if (key == "weights.alpha") cfg.weight_alpha = parse_double(key, val);
    else if (key == "weights.theta") cfg.weight_theta = parse_double(key, val);
    else if (key == "weights.list") cfg.weight_list = parse_list(key, val);
    else if (key == "weights.max_dim") cfg.weight_max_dim = static_cast<int>(parse_int(key, val));
    else if (key == "s") cfg.sparsities = parse_list(key, val);
    else if (key == "oversample_c") cfg.oversample_c = parse_double(key, val);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, val);
    else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
      cfg.seed_set = true;
    } else if (key == "test_seed") {
      cfg.test_seed = static_cast<std::uint64_t>(parse_int(key, val));
      cfg.test_seed_set = true;
    } else if (key == "n_test") cfg.n_test = static_cast<int>(parse_int(key, val));
    else if (key == "recovery") cfg.recovery = val;
    else if (key == "out") cfg.out_dir = val;
    else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, val));
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  if (!cfg.test_seed_set) cfg.test_seed = cfg.seed + 1;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void RunConfig::validate() const {
  if (!seed_set) throw std::invalid_argument("config: key 'seed' is required");
  if (!(model_abar > 0.0)) throw std::invalid_argument("config: 'model.abar' must be > 0");
  if (model_count < 0) throw std::invalid_argument("config: 'model.psi.count' must be >= 0");
  if (model_psi_c < 0.0) throw std::invalid_argument("config: 'model.psi.c' must be >= 0");
  if (!(functional == "average" || functional.rfind("point:", 0) == 0))
    throw std::invalid_argument("config: 'model.functional' must be 'point:X0' or 'average'");
  if (functional.rfind("point:", 0) == 0) {
    const double x0 = parse_double("model.functional", functional.substr(6));
    if (!(x0 > 0.0 && x0 < 1.0))
      throw std::invalid_argument("config: functional point must lie in (0,1)");
  }
  if (weight_kind != "constant" && weight_kind != "polynomial" &&
      weight_kind != "exponential" && weight_kind != "explicit")
    throw std::invalid_argument("config: unknown 'weights.kind' '" + weight_kind + "'");
  if (weight_kind == "constant" && !weight_max_dim)
    throw std::invalid_argument(
        "config: constant weights give an unbounded index set without 'weights.max_dim'");
  if (weight_kind == "explicit" && weight_list.empty())
    throw std::invalid_argument("config: explicit weights require 'weights.list'");
  for (double s : sparsities)
    if (!(s >= 2.0)) throw std::invalid_argument("config: every 's' value must be >= 2");
  if (!(oversample_c > 0.0)) throw std::invalid_argument("config: 'oversample_c' must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("config: 'epsilon' must be > 0");
  if (n_test < 2) throw std::invalid_argument("config: 'n_test' must be >= 2");
  if (recovery != "bpdn" && recovery != "iht")
    throw std::invalid_argument("config: 'recovery' must be 'bpdn' or 'iht'");
  if (workers < 1) throw std::invalid_argument("config: 'workers' must be >= 1");
}

DiffusionModel RunConfig::build_model() const {
  DiffusionModel m = default_model(model_count, model_psi_tau);
  const double scale = model_abar / 2.0;
  if (scale != 1.0) {
    const double abar = model_abar;
    m.abar = [abar](double) { return abar; };
    for (int j = 1; j <= model_count; ++j) {
      auto base = m.psis[static_cast<std::size_t>(j) - 1];
      m.psis[static_cast<std::size_t>(j) - 1] = [base, scale](double x) {
        return scale * base(x);
      };
      m.psi_sup[static_cast<std::size_t>(j) - 1] *= scale;
    }
    m.r *= scale;
    m.R *= scale;
  }
  if (model_psi_c > 0.0) {
    double sum = 0.0;
    for (int j = 1; j <= model_count; ++j) {
      const double c = model_psi_c, tau = model_psi_tau;
      m.psis[static_cast<std::size_t>(j) - 1] = [c, tau, j](double x) {
        return c * std::pow(static_cast<double>(j), -tau) *
               std::sin(j * std::numbers::pi * x);
      };
      m.psi_sup[static_cast<std::size_t>(j) - 1] = c * std::pow(static_cast<double>(j), -tau);
      sum += m.psi_sup[static_cast<std::size_t>(j) - 1];
    }
    if (!(sum < model_abar))
      throw std::invalid_argument("config: psi sup-norm sum breaks ellipticity");
    m.r = model_abar - sum;
    m.R = model_abar + sum;
    m.kappa = std::min(0.999, sum / model_abar * 1.001);
  }
  const double rhs = model_rhs;
  m.rhs = [rhs](double) { return rhs; };
  if (functional == "average") {
    m.functional.kind = Functional::Kind::WeightedAverage;
    m.functional.g = [](double) { return 1.0; };
  } else {
    m.functional.kind = Functional::Kind::PointEval;
    m.functional.x0 = parse_double("model.functional", functional.substr(6));
  }
  if (model_r) m.r = *model_r;
  if (model_R) m.R = *model_R;
  if (model_kappa) m.kappa = *model_kappa;
  return m;
}

WeightParams RunConfig::build_weights() const {
  if (weight_kind == "constant") return WeightParams::constant(weight_beta, weight_theta);
  if (weight_kind == "polynomial")
    return WeightParams::polynomial(weight_c, weight_alpha, weight_theta);
  if (weight_kind == "exponential")
    return WeightParams::exponential(weight_beta, weight_theta);
  return WeightParams::explicit_list(weight_list, weight_theta);
}

} // namespace cspg

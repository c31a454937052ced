// Command-line front end: index-set enumeration and size bounds, end-to-end
// sampling/recovery runs, property verification suites, and the oversampling
// phase-transition sweep.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cspg/config.hpp"
#include "cspg/io.hpp"
#include "cspg/multiindex.hpp"
#include "cspg/pipeline.hpp"
#include "cspg/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

cspg::RunConfig effective_config(const CommonArgs& args) {
  if (args.config_path.empty())
    throw std::invalid_argument("a --config file is required for this command");
  cspg::RunConfig cfg = cspg::load_config(args.config_path);
  if (args.seed) {
    cfg.seed = *args.seed;
    cfg.seed_set = true;
    if (!cfg.test_seed_set) cfg.test_seed = cfg.seed + 1;
  }
  if (args.workers) cfg.workers = *args.workers;
  if (args.out) cfg.out_dir = *args.out;
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

double bound_or_nan(const cspg::RunConfig& cfg, double s) {
  if (cfg.weight_kind == "constant")
    return cspg::corollary_bound_constant(cfg.weight_beta, *cfg.weight_max_dim, s);
  if (cfg.weight_kind == "exponential")
    return cspg::corollary_bound_exponential(cfg.weight_beta, s);
  if (cfg.weight_kind == "polynomial" &&
      cspg::corollary_polynomial_applicable(cfg.weight_c, cfg.weight_alpha, s))
    return cspg::corollary_bound_polynomial(cfg.weight_c, cfg.weight_alpha, s);
  return std::numeric_limits<double>::quiet_NaN();
}

double thm_bound_or_nan(const cspg::WeightParams& w, double s,
                        std::optional<int> max_dim) {
  int d = 0;
  if (w.kind() == cspg::WeightParams::Kind::Constant) d = max_dim.value_or(0);
  else d = cspg::active_dimension(s, w);
  if (d < 1 || d > 20) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> v(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) v[static_cast<std::size_t>(j) - 1] = w.v(j);
  for (double x : v)
    if (!(x > 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return cspg::index_set_size_bound(s / 2.0, v);
}

int cmd_enumerate(const CommonArgs& args, bool sets_only) {
  const cspg::RunConfig cfg = effective_config(args);
  const cspg::WeightParams w = cfg.build_weights();
  std::vector<std::vector<double>> rows;
  for (const double s : cfg.sparsities) {
    const cspg::IndexSet set = cspg::enumerate_index_set(s, w, cfg.weight_max_dim);
    if (!sets_only) {
      char name[64];
      std::snprintf(name, sizeof(name), "indexset_s%g.json", s);
      cspg::write_text_file(cfg.out_dir + "/" + name, set.to_json() + "\n");
    }
    rows.push_back({s, static_cast<double>(set.size()),
                    thm_bound_or_nan(w, s, cfg.weight_max_dim), bound_or_nan(cfg, s)});
    std::cout << "s=" << s << "  N=" << set.size()
              << "  subset-sum bound=" << rows.back()[2]
              << "  closed form=" << rows.back()[3] << "\n";
  }
  cspg::write_csv(cfg.out_dir + (sets_only ? "/bounds.csv" : "/enumerate.csv"),
                  {"s", "exact", "subset_sum_bound", "closed_form_bound"}, rows);
  return kExitOk;
}

int cmd_run(const CommonArgs& args) {
  const cspg::RunConfig cfg = effective_config(args);
  const cspg::WeightParams w = cfg.build_weights();
  const cspg::DiffusionModel model = cfg.build_model();
  model.validate();
  const cspg::RecoveryMethod method =
      cfg.recovery == "iht" ? cspg::RecoveryMethod::Iht : cspg::RecoveryMethod::Bpdn;

  std::vector<std::vector<double>> rows;
  for (const double s : cfg.sparsities) {
    const auto t0 = std::chrono::steady_clock::now();
    const cspg::ExperimentPlan plan = cspg::plan_experiment(
        s, w, cfg.oversample_c, cfg.epsilon, cfg.seed, model, cfg.weight_max_dim);
    if (!plan.compressive)
      std::cerr << "warning: s=" << s << " has m=" << plan.m
                << " >= N=" << plan.set.size() << " (compressive regime lost)\n";
    const cspg::ChebyshevSurrogate sur = cspg::run_cspg(model, plan, method, cfg.workers);
    const cspg::ErrorReport err = cspg::estimate_errors(
        sur, model, cfg.n_test, cfg.test_seed, plan.disc.h / 8.0, cfg.workers);
    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
            .count();

    char name[64];
    std::snprintf(name, sizeof(name), "surrogate_s%g.json", s);
    cspg::write_text_file(cfg.out_dir + "/" + name, cspg::surrogate_to_json(sur));
    rows.push_back({s, static_cast<double>(plan.set.size()),
                    static_cast<double>(plan.m), err.l2, err.l2_se, err.linf, wall_ms});
    std::cout << "s=" << s << "  N=" << plan.set.size() << "  m=" << plan.m
              << "  l2=" << err.l2 << " (se " << err.l2_se << ")  linf>=" << err.linf
              << "  " << wall_ms << " ms\n";
  }
  cspg::write_csv(cfg.out_dir + "/results.csv",
                  {"s", "N", "m", "l2", "l2_se", "linf", "wall_ms"}, rows);
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed) {
  bool all_pass = true;
  for (const std::string& name : suites) {
    const cspg::SuiteReport rep = cspg::run_verify_suite(name, seed);
    for (const cspg::CheckResult& c : rep.checks) {
      std::cout << (c.pass ? "PASS" : "FAIL") << "  " << rep.suite << "/" << c.name
                << "  (" << c.detail << ")\n";
      all_pass = all_pass && c.pass;
    }
  }
  return all_pass ? kExitOk : kExitVerification;
}

int cmd_sweep(const CommonArgs& args, std::vector<double> constants, int n_columns,
              double s, int trials) {
  std::uint64_t seed = args.seed.value_or(0);
  std::string out_dir = args.out.value_or(".");
  if (!args.config_path.empty()) {
    const cspg::RunConfig cfg = effective_config(args);
    seed = cfg.seed;
    out_dir = cfg.out_dir;
  }
  std::filesystem::create_directories(out_dir);
  const std::vector<cspg::SweepRow> rows =
      cspg::sweep_oversample(constants, n_columns, s, trials, seed);
  std::vector<std::vector<double>> csv;
  for (const cspg::SweepRow& r : rows) {
    csv.push_back({r.oversample_C, static_cast<double>(r.m),
                   static_cast<double>(r.trials), static_cast<double>(r.successes)});
    std::cout << "C=" << r.oversample_C << "  m=" << r.m << "  successes=" << r.successes
              << "/" << r.trials << "\n";
  }
  cspg::write_csv(out_dir + "/sweep_oversample.csv",
                  {"oversample_c", "m", "trials", "successes"}, csv);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive-sensing Petrov-Galerkin experiments"};
  app.require_subcommand(1);
  app.fallthrough(); // allow --seed etc. after the subcommand name

  CommonArgs args;
  app.add_option("--config", args.config_path, "experiment configuration file");
  app.add_option("--seed", args.seed, "override the config seed");
  app.add_option("--workers", args.workers, "override the worker count");
  app.add_option("--out", args.out, "override the output directory");

  auto* enumerate = app.add_subcommand("enumerate", "write index sets and size bounds");
  auto* run = app.add_subcommand("run", "full sampling + recovery + error report");
  auto* bounds = app.add_subcommand("bounds", "size-vs-bound table only");
  auto* verify = app.add_subcommand("verify", "run property suites");
  std::vector<std::string> suites;
  verify->add_option("suite", suites, "suites: chebyshev stechkin wrip counting fem recovery (default: all)");

  auto* sweep = app.add_subcommand("sweep-oversample", "phase-transition sweep for the oversampling constant");
  std::vector<double> constants = {0.01, 0.02, 0.03, 0.04, 0.05, 0.07, 0.1};
  int sweep_n = 200, sweep_trials = 50;
  double sweep_s = 20.0;
  sweep->add_option("--constants", constants, "oversampling constants to test");
  sweep->add_option("--columns", sweep_n, "number of matrix columns");
  sweep->add_option("--sparsity", sweep_s, "weighted sparsity of planted vectors");
  sweep->add_option("--trials", sweep_trials, "trials per constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (enumerate->parsed()) return cmd_enumerate(args, false);
    if (bounds->parsed()) return cmd_enumerate(args, true);
    if (run->parsed()) return cmd_run(args);
    if (verify->parsed()) {
      if (suites.empty()) suites = cspg::verify_suite_names();
      return cmd_verify(suites, args.seed.value_or(0));
    }
    if (sweep->parsed()) return cmd_sweep(args, constants, sweep_n, sweep_s, sweep_trials);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

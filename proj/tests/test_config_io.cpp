#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "cspg/config.hpp"
#include "cspg/io.hpp"
#include "cspg/pipeline.hpp"

using namespace cspg;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cspg_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("config parsing: defaults, comments, and overrides") {
  const std::string text = R"(
# experiment
seed = 42
s = 8, 16
epsilon = 1e-3
weights.kind = polynomial
weights.c = 1.25
weights.alpha = 1.0
model.functional = point:0.25
workers = 2
)";
  auto cfg = parse_config(text);
  cfg.validate();
  CHECK(cfg.seed == 42);
  CHECK(cfg.test_seed == 43); // defaults to seed + 1
  REQUIRE(cfg.sparsities.size() == 2);
  CHECK(cfg.sparsities[1] == doctest::Approx(16.0));
  CHECK(cfg.epsilon == doctest::Approx(1e-3));
  CHECK(cfg.weight_c == doctest::Approx(1.25));
  CHECK(cfg.workers == 2);

  auto w = cfg.build_weights();
  CHECK(w.kind() == WeightParams::Kind::Polynomial);
  CHECK(w.v(2) == doctest::Approx(2.5));

  auto model = cfg.build_model();
  model.validate();
  CHECK(model.functional.kind == Functional::Kind::PointEval);
  CHECK(model.functional.x0 == doctest::Approx(0.25));
}

TEST_CASE("config parsing rejects unknown keys by name") {
  CHECK_THROWS_WITH_AS(parse_config("seed = 1\nbogus_key = 3\n"),
                       doctest::Contains("bogus_key"), std::invalid_argument);
}

TEST_CASE("config validation failures") {
  // parsing validates the assembled configuration before returning it
  CHECK_THROWS_WITH_AS(parse_config("epsilon = 1e-3\n"), doctest::Contains("seed"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config("seed = 1\nepsilon = -2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("seed = 1\nrecovery = magic\n"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config("seed = 1\nweights.kind = constant\nweights.beta = 1.5\n"),
      doctest::Contains("unbounded index set"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("seed = one\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("just a line without equals\n"), std::invalid_argument);
}

TEST_CASE("explicit weight lists parse into explicit weight parameters") {
  auto cfg = parse_config("seed = 5\nweights.kind = explicit\nweights.list = 1.3, 1.6, 2.0\n");
  cfg.validate();
  auto w = cfg.build_weights();
  CHECK(w.kind() == WeightParams::Kind::Explicit);
  REQUIRE(w.explicit_size() == 3);
  CHECK(w.v(3) == doctest::Approx(2.0));
}

TEST_CASE("hashes are deterministic and content-sensitive") {
  CHECK(fnv1a(std::string("abc")) == fnv1a(std::string("abc")));
  CHECK(fnv1a(std::string("abc")) != fnv1a(std::string("abd")));

  auto set = enumerate_index_set(64.0, WeightParams::polynomial(1.2, 1.0));
  const auto h1 = index_set_hash(set);
  auto reparsed = IndexSet::from_json(set.to_json());
  CHECK(index_set_hash(reparsed) == h1);
}

TEST_CASE("binary matrix round trip") {
  SamplingMatrix phi;
  phi.m = 3;
  phi.n = 2;
  phi.seed = 99;
  phi.data = {1.0, -0.5, 0.25, 2.0, -1.25, 0.75};
  const auto path = (temp_dir() / "mat.bin").string();
  write_matrix_binary(path, phi, 1234);
  auto back = read_matrix_binary(path);
  CHECK(back.m == phi.m);
  CHECK(back.n == phi.n);
  CHECK(back.seed == phi.seed);
  REQUIRE(back.data.size() == phi.data.size());
  for (std::size_t i = 0; i < phi.data.size(); ++i) CHECK(back.data[i] == phi.data[i]);
  std::remove(path.c_str());
}

TEST_CASE("binary vector round trip and container validation") {
  const std::vector<double> v{0.1, -2.5, 3.75, 1e-17};
  const auto path = (temp_dir() / "vec.bin").string();
  write_vector_binary(path, v, 77);
  auto back = read_vector_binary(path);
  REQUIRE(back.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);

  // a vector container does not parse as a matrix
  CHECK_THROWS_AS(read_matrix_binary(path), std::runtime_error);
  std::remove(path.c_str());

  const auto junk = (temp_dir() / "junk.bin").string();
  write_text_file(junk, "not a container");
  CHECK_THROWS_AS(read_vector_binary(junk), std::runtime_error);
  std::remove(junk.c_str());
}

TEST_CASE("CSV writing enforces the header width") {
  const auto path = (temp_dir() / "table.csv").string();
  write_csv(path, {"a", "b"}, {{1.0, 2.0}, {3.0, 4.0}});
  auto text = read_text_file(path);
  CHECK(text.find("a,b") == 0);
  CHECK(text.find("\n1,2\n") != std::string::npos);
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_csv(path, {"a", "b"}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("surrogate JSON carries the full-precision coefficients") {
  auto model = default_model(4);
  auto plan = plan_experiment(8.0, WeightParams::polynomial(1.3, 1.0), 1.0, 1e-3, 3,
                              model);
  auto surrogate = run_cspg(model, plan);
  auto text = surrogate_to_json(surrogate);
  CHECK(text.find("coefficients") != std::string::npos);
  CHECK(text.find("indices") != std::string::npos);
  // identical surrogates serialize identically
  auto again = run_cspg(model, plan);
  CHECK(surrogate_to_json(again) == text);
  CHECK(surrogate_hash(again) == surrogate_hash(surrogate));
}

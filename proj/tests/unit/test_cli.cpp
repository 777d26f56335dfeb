#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "bpm/bounds.hpp"
#include "config.hpp"
#include "experiment.hpp"

using bpm::cli::ConfigError;
using bpm::cli::ExperimentConfig;

namespace {

namespace fs = std::filesystem;

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "bpm_cli_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::trunc);
  out << body;
  return path.string();
}

}  // namespace

TEST_CASE("cli: config file overrides only the keys it sets") {
  const auto path = write_config("override.json",
                                 R"({"delta": 0.05, "seed": 9,
                                     "n_grid": [10, 20],
                                     "kernel": "rbf", "lengthscale": 2.5})");
  const ExperimentConfig base;
  const ExperimentConfig c = bpm::cli::load_config_file(path, base);
  CHECK(c.delta == 0.05);
  CHECK(c.seed == 9);
  CHECK(c.n_grid == std::vector<int>{10, 20});
  CHECK(c.kernel == "rbf");
  CHECK(c.lengthscale == 2.5);
  // untouched keys keep their base values
  CHECK(c.ensemble == base.ensemble);
  CHECK(c.dataset == base.dataset);
  CHECK(c.depth == base.depth);
  CHECK(c.out_dir == base.out_dir);
}

TEST_CASE("cli: config loader rejects damaged files") {
  const ExperimentConfig base;
  CHECK_THROWS_AS(
      (void)bpm::cli::load_config_file(
          write_config("unknown.json", R"({"depht": 3})"), base),
      ConfigError);
  CHECK_THROWS_AS(
      (void)bpm::cli::load_config_file(
          write_config("badtype.json", R"({"delta": "soon"})"), base),
      ConfigError);
  CHECK_THROWS_AS((void)bpm::cli::load_config_file(
                      write_config("notjson.json", "delta = 0.1"), base),
                  ConfigError);
  CHECK_THROWS_AS((void)bpm::cli::load_config_file(
                      write_config("array.json", "[1, 2]"), base),
                  ConfigError);
  CHECK_THROWS_AS(
      (void)bpm::cli::load_config_file("/nonexistent/config.json", base),
      ConfigError);
}

TEST_CASE("cli: config serialization roundtrips every field") {
  ExperimentConfig c;
  c.dataset = "synthetic_xor";
  c.mnist_images = "a";
  c.mnist_labels = "b";
  c.synth_dim = 5;
  c.synth_separation = 1.25;
  c.kernel = "rbf";
  c.depth = 3;
  c.lengthscale = 0.75;
  c.n_grid = {7, 9};
  c.test_count = 123;
  c.delta = 0.2;
  c.ensemble = 17;
  c.burn_in = 4;
  c.thinning = 2;
  c.ycom_cap = 33;
  c.orthant_draws = 999;
  c.seed = 424242;
  c.out_dir = "elsewhere";

  const auto path = write_config("echo.json", bpm::cli::config_to_json(c));
  const ExperimentConfig b =
      bpm::cli::load_config_file(path, ExperimentConfig{});
  CHECK(b.dataset == c.dataset);
  CHECK(b.mnist_images == c.mnist_images);
  CHECK(b.mnist_labels == c.mnist_labels);
  CHECK(b.synth_dim == c.synth_dim);
  CHECK(b.synth_separation == c.synth_separation);
  CHECK(b.kernel == c.kernel);
  CHECK(b.depth == c.depth);
  CHECK(b.lengthscale == c.lengthscale);
  CHECK(b.n_grid == c.n_grid);
  CHECK(b.test_count == c.test_count);
  CHECK(b.delta == c.delta);
  CHECK(b.ensemble == c.ensemble);
  CHECK(b.burn_in == c.burn_in);
  CHECK(b.thinning == c.thinning);
  CHECK(b.ycom_cap == c.ycom_cap);
  CHECK(b.orthant_draws == c.orthant_draws);
  CHECK(b.seed == c.seed);
  CHECK(b.out_dir == c.out_dir);
}

TEST_CASE("cli: n-grid parsing") {
  CHECK(bpm::cli::parse_n_grid("100,200,500") ==
        std::vector<int>{100, 200, 500});
  CHECK(bpm::cli::parse_n_grid("7") == std::vector<int>{7});
  CHECK_THROWS_AS((void)bpm::cli::parse_n_grid("abc"), ConfigError);
  CHECK_THROWS_AS((void)bpm::cli::parse_n_grid(""), ConfigError);
  CHECK_THROWS_AS((void)bpm::cli::parse_n_grid("10,,20"), ConfigError);
}

TEST_CASE("cli: config validation catches every inconsistency") {
  const ExperimentConfig good;
  CHECK_NOTHROW(bpm::cli::validate_config(good));

  auto expect_reject = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    CHECK_THROWS_AS(bpm::cli::validate_config(c), ConfigError);
  };
  expect_reject([](ExperimentConfig& c) { c.dataset = "imagenet"; });
  expect_reject([](ExperimentConfig& c) { c.kernel = "poly"; });
  expect_reject([](ExperimentConfig& c) { c.depth = 1; });
  expect_reject([](ExperimentConfig& c) {
    c.kernel = "rbf";
    c.lengthscale = 0.0;
  });
  expect_reject([](ExperimentConfig& c) { c.n_grid = {}; });
  expect_reject([](ExperimentConfig& c) { c.n_grid = {100, 100}; });
  expect_reject([](ExperimentConfig& c) { c.n_grid = {0, 10}; });
  expect_reject([](ExperimentConfig& c) { c.test_count = 0; });
  expect_reject([](ExperimentConfig& c) { c.delta = 0.0; });
  expect_reject([](ExperimentConfig& c) { c.delta = 1.0; });
  expect_reject([](ExperimentConfig& c) { c.ensemble = 0; });
  expect_reject([](ExperimentConfig& c) { c.burn_in = -1; });
  expect_reject([](ExperimentConfig& c) { c.thinning = 0; });
  expect_reject([](ExperimentConfig& c) { c.ycom_cap = -1; });
  expect_reject([](ExperimentConfig& c) { c.orthant_draws = 0; });
  expect_reject([](ExperimentConfig& c) { c.synth_dim = 1; });
  expect_reject([](ExperimentConfig& c) { c.out_dir = ""; });
}

TEST_CASE("cli: kernel construction from config") {
  ExperimentConfig c;
  c.kernel = "arccosine";
  c.depth = 5;
  auto spec = bpm::cli::kernel_from_config(c, 12);
  CHECK(spec.kind == bpm::KernelKind::arccosine);
  CHECK(spec.depth == 5);
  CHECK(spec.input_dim == 12);

  c.kernel = "linear";
  CHECK(bpm::cli::kernel_from_config(c, 3).kind == bpm::KernelKind::linear);

  c.kernel = "rbf";
  c.lengthscale = 2.0;
  spec = bpm::cli::kernel_from_config(c, 4);
  CHECK(spec.kind == bpm::KernelKind::rbf);
  CHECK(spec.lengthscale == 2.0);
}

TEST_CASE("cli: dataset dispatch follows the config") {
  ExperimentConfig c;
  c.dataset = "synthetic_xor";
  c.synth_dim = 4;
  CHECK(bpm::cli::build_dataset(c, 10).source ==
        bpm::DataSource::synthetic_xor);
  c.dataset = "synthetic_gaussians";
  const auto d = bpm::cli::build_dataset(c, 10);
  CHECK(d.source == bpm::DataSource::synthetic_gaussians);
  CHECK(d.count() == 10);
  CHECK(d.dim() == 4);
}

TEST_CASE("cli: bounds row on an exactly-identity gram") {
  // rows e_i with the linear kernel give K = I, where every quantity in the
  // row has a closed form
  ExperimentConfig c;
  c.kernel = "linear";
  c.n_grid = {4};
  c.ycom_cap = 4;
  c.delta = 0.1;
  c.orthant_draws = 500;
  c.seed = 3;

  bpm::Dataset train;
  train.X = Eigen::MatrixXd::Identity(4, 4);
  train.Y.resize(4);
  train.Y << 1, -1, 1, -1;

  const bpm::BoundReport r = bpm::cli::bounds_row(c, train, 4);
  const double ln2 = std::numbers::ln2;
  CHECK(r.n == 4);
  CHECK(r.delta == 0.1);
  CHECK(r.seed == 3);
  CHECK(r.jitter_used == 0.0);
  CHECK(std::abs(r.kl_iso - 4.0 * ln2) < 1e-12);
  CHECK(r.gibbs_bound ==
        doctest::Approx(1.0 - std::exp(-(4.0 * ln2 + std::log(80.0)) / 3.0))
            .epsilon(1e-14));
  CHECK(r.bpm_bound_centroid ==
        doctest::Approx(std::numbers::e * r.gibbs_bound).epsilon(1e-15));
  CHECK(r.rademacher_bound == doctest::Approx(4.0).epsilon(1e-14));

  REQUIRE(r.log_inv_py.has_value());
  CHECK(r.log_inv_py->method == bpm::OrthantMethod::ghk);
  CHECK(r.log_inv_py->draws == 500);
  CHECK(r.log_inv_py->std_error == 0.0);
  CHECK(std::abs(r.log_inv_py->log_inv_py - 4.0 * ln2) < 1e-9);
  REQUIRE(r.bpm_bound_com.has_value());
  CHECK(r.bpm_bound_com->value == r.bpm_bound_com->conservative);
  CHECK(std::abs(r.bpm_bound_com->value - r.bpm_bound_centroid) < 1e-9);

  // above the cap the Monte-Carlo block is skipped
  c.ycom_cap = 3;
  const auto capped = bpm::cli::bounds_row(c, train, 4);
  CHECK_FALSE(capped.log_inv_py.has_value());
  CHECK_FALSE(capped.bpm_bound_com.has_value());
}

TEST_CASE("cli: single-member ensembles make Bayes equal Gibbs") {
  ExperimentConfig c;
  c.dataset = "synthetic_gaussians";
  c.synth_dim = 6;
  c.synth_separation = 3.0;
  c.kernel = "arccosine";
  c.depth = 3;
  c.ensemble = 1;
  c.ycom_cap = 0;
  c.n_grid = {12};
  c.test_count = 25;
  c.seed = 17;

  const auto all = bpm::cli::build_dataset(c, 37);
  const auto train = all.head(12);
  const auto test = all.slice(12, 25);
  const bpm::EvalReport r = bpm::cli::compare_row(c, train, test, 12);

  CHECK(r.ensemble == 1);
  CHECK(r.eval.test_count == 25);
  // a single vote is its own majority
  CHECK(r.eval.eps_bayes == r.eval.eps_gibbs);
  CHECK(r.eval.alpha_gibbs == 1.0);
  CHECK(r.eval.delta_approx >= 0.0);
  CHECK_FALSE(r.err_bpm_com.has_value());
}

TEST_CASE("cli: prediction runs are seed-deterministic") {
  ExperimentConfig c;
  c.dataset = "synthetic_xor";
  c.synth_dim = 5;
  c.kernel = "arccosine";
  c.depth = 3;
  c.ensemble = 30;
  c.burn_in = 20;
  c.thinning = 2;
  c.ycom_cap = 10;
  c.n_grid = {10};
  c.test_count = 15;
  c.seed = 99;

  const auto all = bpm::cli::build_dataset(c, 25);
  const auto train = all.head(10);
  const auto test = all.slice(10, 15);

  const auto a = bpm::cli::run_predictions(c, train, test, 10);
  const auto b = bpm::cli::run_predictions(c, train, test, 10);
  CHECK(a.truth == b.truth);
  CHECK(a.votes == b.votes);
  CHECK(a.bpm == b.bpm);
  REQUIRE(a.bpm_com.has_value());
  REQUIRE(b.bpm_com.has_value());
  CHECK(*a.bpm_com == *b.bpm_com);
  CHECK(a.votes.size() == 15);
  CHECK(a.votes[0].size() == 30);
}

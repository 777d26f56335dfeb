#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpm/kernel.hpp"

namespace bpm::cli {

/// Invalid or inconsistent experiment configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs. Populated from defaults, then an optional JSON
/// config file, then command-line flags (flags win).
struct ExperimentConfig {
  // dataset
  std::string dataset = "synthetic_gaussians";
  std::string mnist_images = "data/mnist/mnist-subset-images-idx3-ubyte";
  std::string mnist_labels = "data/mnist/mnist-subset-labels-idx1-ubyte";
  int synth_dim = 16;
  double synth_separation = 4.0;

  // kernel
  std::string kernel = "arccosine";
  int depth = 7;
  double lengthscale = 1.0;

  // experiment shape
  std::vector<int> n_grid = {100, 200, 500, 1000};
  int test_count = 1000;
  double delta = 0.1;
  int ensemble = 1000;
  int burn_in = 100;
  int thinning = 10;
  int ycom_cap = 200;
  std::int64_t orthant_draws = 20000;

  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

/// Parses a JSON config file over `base`. Unknown keys are errors.
[[nodiscard]] ExperimentConfig load_config_file(const std::string& path,
                                                const ExperimentConfig& base);

/// Throws ConfigError unless the configuration is self-consistent
/// (n_grid strictly increasing, counts positive, delta in (0,1), ...).
void validate_config(const ExperimentConfig& c);

/// KernelSpec for the configured kernel at input dimension d0.
[[nodiscard]] KernelSpec kernel_from_config(const ExperimentConfig& c, int d0);

/// Serialized echo of the configuration (written next to report files so
/// every run is reproducible from its output directory alone).
[[nodiscard]] std::string config_to_json(const ExperimentConfig& c);

/// Parses "100,200,500" into a grid.
[[nodiscard]] std::vector<int> parse_n_grid(const std::string& csv);

}  // namespace bpm::cli

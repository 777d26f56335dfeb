#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bpm::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "dataset",    "mnist_images", "mnist_labels", "synth_dim",
    "synth_separation", "kernel", "depth",        "lengthscale",
    "n_grid",     "test_count",   "delta",        "ensemble",
    "burn_in",    "thinning",     "ycom_cap",     "orthant_draws",
    "seed",       "out_dir"};

}  // namespace

ExperimentConfig load_config_file(const std::string& path,
                                  const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig c = base;
  try {
    for (const auto& [key, val] : j.items()) {
      if (!kKnownKeys.count(key)) {
        throw ConfigError("config: unknown key '" + key + "'");
      }
      if (key == "dataset") c.dataset = val.get<std::string>();
      else if (key == "mnist_images") c.mnist_images = val.get<std::string>();
      else if (key == "mnist_labels") c.mnist_labels = val.get<std::string>();
      else if (key == "synth_dim") c.synth_dim = val.get<int>();
      else if (key == "synth_separation") c.synth_separation = val.get<double>();
      else if (key == "kernel") c.kernel = val.get<std::string>();
      else if (key == "depth") c.depth = val.get<int>();
      else if (key == "lengthscale") c.lengthscale = val.get<double>();
      else if (key == "n_grid") c.n_grid = val.get<std::vector<int>>();
      else if (key == "test_count") c.test_count = val.get<int>();
      else if (key == "delta") c.delta = val.get<double>();
      else if (key == "ensemble") c.ensemble = val.get<int>();
      else if (key == "burn_in") c.burn_in = val.get<int>();
      else if (key == "thinning") c.thinning = val.get<int>();
      else if (key == "ycom_cap") c.ycom_cap = val.get<int>();
      else if (key == "orthant_draws") c.orthant_draws = val.get<std::int64_t>();
      else if (key == "seed") c.seed = val.get<std::uint64_t>();
      else if (key == "out_dir") c.out_dir = val.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value type: ") + e.what());
  }
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (c.dataset != "mnist_even_odd" && c.dataset != "synthetic_gaussians" &&
      c.dataset != "synthetic_xor") {
    throw ConfigError("config: unknown dataset '" + c.dataset + "'");
  }
  if (c.kernel != "arccosine" && c.kernel != "linear" && c.kernel != "rbf") {
    throw ConfigError("config: unknown kernel '" + c.kernel + "'");
  }
  if (c.kernel == "arccosine" && c.depth < 2) {
    throw ConfigError("config: arccosine depth must be >= 2");
  }
  if (c.kernel == "rbf" && !(c.lengthscale > 0.0)) {
    throw ConfigError("config: rbf lengthscale must be > 0");
  }
  if (c.n_grid.empty()) throw ConfigError("config: n_grid must be non-empty");
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (c.n_grid[i] < 1) throw ConfigError("config: n_grid entries must be >= 1");
    if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) {
      throw ConfigError("config: n_grid must be strictly increasing");
    }
  }
  if (c.test_count < 1) throw ConfigError("config: test_count must be >= 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) {
    throw ConfigError("config: delta must lie in (0, 1)");
  }
  if (c.ensemble < 1) throw ConfigError("config: ensemble must be >= 1");
  if (c.burn_in < 0) throw ConfigError("config: burn_in must be >= 0");
  if (c.thinning < 1) throw ConfigError("config: thinning must be >= 1");
  if (c.ycom_cap < 0) throw ConfigError("config: ycom_cap must be >= 0");
  if (c.orthant_draws < 1) {
    throw ConfigError("config: orthant_draws must be >= 1");
  }
  if (c.synth_dim < 2) throw ConfigError("config: synth_dim must be >= 2");
  if (c.out_dir.empty()) throw ConfigError("config: out_dir must be set");
}

KernelSpec kernel_from_config(const ExperimentConfig& c, int d0) {
  if (c.kernel == "arccosine") return KernelSpec::arccosine(c.depth, d0);
  if (c.kernel == "linear") return KernelSpec::linear(d0);
  return KernelSpec::rbf(c.lengthscale, d0);
}

std::string config_to_json(const ExperimentConfig& c) {
  json j{{"dataset", c.dataset},
         {"mnist_images", c.mnist_images},
         {"mnist_labels", c.mnist_labels},
         {"synth_dim", c.synth_dim},
         {"synth_separation", c.synth_separation},
         {"kernel", c.kernel},
         {"depth", c.depth},
         {"lengthscale", c.lengthscale},
         {"n_grid", c.n_grid},
         {"test_count", c.test_count},
         {"delta", c.delta},
         {"ensemble", c.ensemble},
         {"burn_in", c.burn_in},
         {"thinning", c.thinning},
         {"ycom_cap", c.ycom_cap},
         {"orthant_draws", c.orthant_draws},
         {"seed", c.seed},
         {"out_dir", c.out_dir}};
  return j.dump(2);
}

std::vector<int> parse_n_grid(const std::string& csv) {
  std::vector<int> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("config: bad n-grid entry '" + item + "'");
    }
  }
  if (grid.empty()) throw ConfigError("config: empty n-grid");
  return grid;
}

}  // namespace bpm::cli

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "bpm/data.hpp"
#include "bpm/report.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;

namespace bpm::cli {
namespace {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Flag values live here; the Option pointers say which were actually given,
/// so a config file can sit between defaults and flags with flags winning.
struct Flags {
  std::string config_path;
  ExperimentConfig v;
  std::string n_grid_csv;

  CLI::Option* seed = nullptr;
  CLI::Option* out_dir = nullptr;
  CLI::Option* n_grid = nullptr;
  CLI::Option* delta = nullptr;
  CLI::Option* depth = nullptr;
  CLI::Option* ensemble = nullptr;
  CLI::Option* ycom_cap = nullptr;
  CLI::Option* dataset = nullptr;
  CLI::Option* kernel = nullptr;
  CLI::Option* lengthscale = nullptr;
  CLI::Option* test_count = nullptr;
  CLI::Option* burn_in = nullptr;
  CLI::Option* thinning = nullptr;
  CLI::Option* orthant_draws = nullptr;
  CLI::Option* synth_dim = nullptr;
  CLI::Option* separation = nullptr;
  CLI::Option* mnist_images = nullptr;
  CLI::Option* mnist_labels = nullptr;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path,
                  "JSON config file; flags override its values");
  f.seed = cmd->add_option("--seed", f.v.seed, "master seed");
  f.out_dir = cmd->add_option("--out-dir", f.v.out_dir,
                              "report/output directory (default: out)");
  f.n_grid = cmd->add_option("--n-grid", f.n_grid_csv,
                             "training sizes, e.g. 100,200,500,1000");
  f.delta = cmd->add_option("--delta", f.v.delta,
                            "bound confidence parameter in (0,1)");
  f.depth = cmd->add_option("--depth", f.v.depth,
                            "arccosine kernel depth L (>= 2)");
  f.ensemble = cmd->add_option("--ensemble", f.v.ensemble,
                               "posterior draws per training size");
  f.ycom_cap = cmd->add_option(
      "--ycom-cap", f.v.ycom_cap,
      "largest n for the centre-of-mass chain and orthant estimate");
  f.dataset = cmd->add_option("--dataset", f.v.dataset,
                              "mnist_even_odd | synthetic_gaussians | "
                              "synthetic_xor");
  f.kernel = cmd->add_option("--kernel", f.v.kernel,
                             "arccosine | linear | rbf");
  f.lengthscale =
      cmd->add_option("--lengthscale", f.v.lengthscale, "rbf lengthscale");
  f.test_count =
      cmd->add_option("--test-count", f.v.test_count, "held-out test points");
  f.burn_in = cmd->add_option("--burn-in", f.v.burn_in, "Gibbs burn-in sweeps");
  f.thinning =
      cmd->add_option("--thinning", f.v.thinning, "Gibbs sweeps per draw");
  f.orthant_draws = cmd->add_option("--orthant-draws", f.v.orthant_draws,
                                    "paths for the orthant-mass estimate");
  f.synth_dim = cmd->add_option("--synth-dim", f.v.synth_dim,
                                "synthetic input dimension");
  f.separation = cmd->add_option("--separation", f.v.synth_separation,
                                 "synthetic cluster separation");
  f.mnist_images =
      cmd->add_option("--mnist-images", f.v.mnist_images, "IDX image file");
  f.mnist_labels =
      cmd->add_option("--mnist-labels", f.v.mnist_labels, "IDX label file");
}

ExperimentConfig resolve_config(const Flags& f) {
  ExperimentConfig c;
  if (!f.config_path.empty()) c = load_config_file(f.config_path, c);
  if (f.seed->count()) c.seed = f.v.seed;
  if (f.out_dir->count()) c.out_dir = f.v.out_dir;
  if (f.n_grid->count()) c.n_grid = parse_n_grid(f.n_grid_csv);
  if (f.delta->count()) c.delta = f.v.delta;
  if (f.depth->count()) c.depth = f.v.depth;
  if (f.ensemble->count()) c.ensemble = f.v.ensemble;
  if (f.ycom_cap->count()) c.ycom_cap = f.v.ycom_cap;
  if (f.dataset->count()) c.dataset = f.v.dataset;
  if (f.kernel->count()) c.kernel = f.v.kernel;
  if (f.lengthscale->count()) c.lengthscale = f.v.lengthscale;
  if (f.test_count->count()) c.test_count = f.v.test_count;
  if (f.burn_in->count()) c.burn_in = f.v.burn_in;
  if (f.thinning->count()) c.thinning = f.v.thinning;
  if (f.orthant_draws->count()) c.orthant_draws = f.v.orthant_draws;
  if (f.synth_dim->count()) c.synth_dim = f.v.synth_dim;
  if (f.separation->count()) c.synth_separation = f.v.synth_separation;
  if (f.mnist_images->count()) c.mnist_images = f.v.mnist_images;
  if (f.mnist_labels->count()) c.mnist_labels = f.v.mnist_labels;
  validate_config(c);
  return c;
}

void start_run(const ExperimentConfig& c) {
  fs::create_directories(c.out_dir);
  write_text(c.out_dir + "/run_config.json", config_to_json(c));
}

int cmd_bounds(const ExperimentConfig& c) {
  start_run(c);
  const Dataset train = build_dataset(c, c.n_grid.back());
  std::vector<BoundReport> rows;
  bool any_failed = false;
  for (int n : c.n_grid) {
    try {
      rows.push_back(bounds_row(c, train, n));
      append_report(c.out_dir + "/bounds.jsonl", rows.back());
      const BoundReport& r = rows.back();
      std::printf("n=%d A=%.4f gibbs=%.4f bpm=%.4f rademacher=%.4f%s\n", n,
                  r.kl_iso, r.gibbs_bound, r.bpm_bound_centroid,
                  r.rademacher_bound,
                  r.bpm_bound_com
                      ? (" bpm_com=" + format_double(r.bpm_bound_com->value))
                            .c_str()
                      : "");
    } catch (const std::exception& e) {
      std::fprintf(stderr, "bounds: n=%d failed: %s\n", n, e.what());
      any_failed = true;
    }
  }
  write_bounds_csv(c.out_dir + "/bounds.csv", rows);
  return any_failed ? 1 : 0;
}

int cmd_compare(const ExperimentConfig& c) {
  start_run(c);
  const int nmax = c.n_grid.back();
  const Dataset all = build_dataset(c, nmax + c.test_count);
  const Dataset train = all.head(nmax);
  const Dataset test = all.slice(nmax, c.test_count);
  std::vector<EvalReport> rows;
  bool any_failed = false;
  for (int n : c.n_grid) {
    try {
      rows.push_back(compare_row(c, train, test, n));
      append_report(c.out_dir + "/compare.jsonl", rows.back());
      const EvalReport& r = rows.back();
      std::printf(
          "n=%d eps_gibbs=%.4f eps_bayes=%.4f eps_bpm=%.4f delta=%.4f%s\n", n,
          r.eval.eps_gibbs, r.eval.eps_bayes, r.eval.eps_bpm,
          r.eval.delta_approx,
          r.err_bpm_com
              ? (" eps_bpm_com=" + format_double(*r.err_bpm_com)).c_str()
              : "");
    } catch (const std::exception& e) {
      std::fprintf(stderr, "compare: n=%d failed: %s\n", n, e.what());
      any_failed = true;
    }
  }
  write_eval_csv(c.out_dir + "/compare.csv", rows);
  return any_failed ? 1 : 0;
}

void persist_chain(const std::string& stem, const PosteriorSamples& s) {
  save_matrix(stem + ".mat", s.samples);
  nlohmann::json meta;
  meta["kind"] = s.kind == PosteriorKind::iso ? "iso" : "gp";
  meta["burn_in"] = s.meta.burn_in;
  meta["thinning"] = s.meta.thinning;
  meta["seed"] = s.meta.seed;
  meta["rows"] = s.samples.rows();
  meta["cols"] = s.samples.cols();
  write_text(stem + ".meta.json", meta.dump(2) + "\n");
}

int cmd_sample(const ExperimentConfig& c, const std::string& posterior) {
  start_run(c);
  const Dataset train = build_dataset(c, c.n_grid.back());
  for (int n : c.n_grid) {
    const Dataset sub = train.head(n);
    const KernelSpec spec = kernel_from_config(c, static_cast<int>(sub.dim()));
    const GramFactorization f = factorize(gram_matrix(spec, sub.X));
    const std::string base = c.out_dir + "/n" + std::to_string(n);
    save_matrix(base + "_labels.mat", sub.Y);
    if (posterior != "gp") {
      persist_chain(base + "_iso", draw_iso_posterior(c, f, sub.Y, n));
    }
    if (posterior != "iso") {
      persist_chain(base + "_gp", draw_gp_posterior(c, f, sub.Y, n));
    }
    std::printf("n=%d chains written under %s (jitter %s)\n", n, base.c_str(),
                format_double(f.jitter_used()).c_str());
  }
  return 0;
}

int cmd_data(const ExperimentConfig& c, int count) {
  const int want = count > 0 ? count : c.n_grid.back() + c.test_count;
  const Dataset d = build_dataset(c, want);
  start_run(c);
  save_matrix(c.out_dir + "/features.mat", d.X);
  save_matrix(c.out_dir + "/labels.mat", d.Y);

  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < d.count(); ++i) {
    if (d.Y(i) > 0.0) ++positives;
  }
  const Eigen::VectorXd norms = d.X.rowwise().squaredNorm();
  std::printf(
      "dataset=%s count=%lld dim=%lld positive=%.4f row_norm_sq=[%.12g, "
      "%.12g]\n",
      c.dataset.c_str(), static_cast<long long>(d.count()),
      static_cast<long long>(d.dim()),
      static_cast<double>(positives) / static_cast<double>(d.count()),
      norms.minCoeff(), norms.maxCoeff());
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Kernel interpolation as a Bayes point machine: risk bounds, posterior "
      "sampling, and classifier comparisons"};
  app.require_subcommand(1);

  Flags fb;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "complexity and risk bounds per training size");
  add_common_flags(bounds, fb);

  Flags fc;
  CLI::App* compare = app.add_subcommand(
      "compare", "empirical Gibbs/Bayes/BPM test errors per training size");
  add_common_flags(compare, fc);

  Flags fs_;
  std::string posterior = "both";
  CLI::App* sample =
      app.add_subcommand("sample", "draw and persist posterior chains");
  add_common_flags(sample, fs_);
  sample->add_option("--posterior", posterior, "iso | gp | both")
      ->check(CLI::IsMember({"iso", "gp", "both"}));

  Flags fd;
  int data_count = 0;
  CLI::App* data =
      app.add_subcommand("data", "build, inspect and persist the dataset");
  add_common_flags(data, fd);
  data->add_option("--count", data_count, "examples to build (default: "
                                          "max n + test count)");

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the statistical verification suites");
  verify->add_option("--seed", vopt.seed, "suite seed");
  verify->add_flag("--inject-failure", vopt.inject_failure,
                   "corrupt one tolerance to exercise the failure path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(resolve_config(fb));
    if (compare->parsed()) return cmd_compare(resolve_config(fc));
    if (sample->parsed()) return cmd_sample(resolve_config(fs_), posterior);
    if (data->parsed()) return cmd_data(resolve_config(fd), data_count);
    if (verify->parsed()) return run_verify(vopt) == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace
}  // namespace bpm::cli

int main(int argc, char** argv) { return bpm::cli::run(argc, argv); }

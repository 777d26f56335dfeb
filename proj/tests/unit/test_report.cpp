#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bpm/report.hpp"

using bpm::BoundReport;
using bpm::EvalReport;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "bpm_report_tests";
  fs::create_directories(dir);
  return dir;
}

BoundReport sample_bound_report(bool with_optionals) {
  BoundReport r;
  r.n = 64;
  r.delta = 0.05;
  r.kl_iso = 44.3614195558365;
  r.gibbs_bound = 0.5123456789012345;
  r.bpm_bound_centroid = 1.392703;
  r.rademacher_bound = 2.718;
  r.jitter_used = 1e-10;
  r.seed = 987654321;
  if (with_optionals) {
    bpm::OrthantEstimate est;
    est.log_inv_py = 41.25;
    est.std_error = 0.125;
    est.method = bpm::OrthantMethod::ghk;
    est.draws = 20000;
    est.hits = 0;
    est.ok = true;
    r.log_inv_py = est;
    r.bpm_bound_com = bpm::BpmComBound{1.31, 1.35};
    r.c_bound = 0.42;
  }
  return r;
}

EvalReport sample_eval_report(bool with_optionals) {
  EvalReport r;
  r.n = 80;
  r.delta = 0.1;
  r.ensemble = 400;
  r.eval.test_count = 600;
  r.eval.eps_gibbs = 0.21;
  r.eval.eps_bayes = 0.15;
  r.eval.eps_bpm = 0.145;
  r.eval.delta_approx = 0.02;
  r.eval.alpha_gibbs = 0.64;
  r.eval.bayes_tie_count = 3;
  r.jitter_used = 0.0;
  r.seed = 11;
  if (with_optionals) r.err_bpm_com = 0.15;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

TEST_CASE("report: bound records roundtrip with optionals present") {
  const BoundReport r = sample_bound_report(true);
  const BoundReport b = bpm::parse_bound_report(bpm::to_record(r));
  CHECK(b.n == r.n);
  CHECK(b.delta == r.delta);
  CHECK(b.kl_iso == r.kl_iso);
  CHECK(b.gibbs_bound == r.gibbs_bound);
  CHECK(b.bpm_bound_centroid == r.bpm_bound_centroid);
  CHECK(b.rademacher_bound == r.rademacher_bound);
  CHECK(b.jitter_used == r.jitter_used);
  CHECK(b.seed == r.seed);
  REQUIRE(b.log_inv_py.has_value());
  CHECK(b.log_inv_py->log_inv_py == 41.25);
  CHECK(b.log_inv_py->std_error == 0.125);
  CHECK(b.log_inv_py->method == bpm::OrthantMethod::ghk);
  CHECK(b.log_inv_py->draws == 20000);
  CHECK(b.log_inv_py->ok);
  REQUIRE(b.bpm_bound_com.has_value());
  CHECK(b.bpm_bound_com->value == 1.31);
  CHECK(b.bpm_bound_com->conservative == 1.35);
  REQUIRE(b.c_bound.has_value());
  CHECK(*b.c_bound == 0.42);
}

TEST_CASE("report: bound records roundtrip with optionals absent") {
  const BoundReport b =
      bpm::parse_bound_report(bpm::to_record(sample_bound_report(false)));
  CHECK_FALSE(b.log_inv_py.has_value());
  CHECK_FALSE(b.bpm_bound_com.has_value());
  CHECK_FALSE(b.c_bound.has_value());
}

TEST_CASE("report: eval records roundtrip both ways") {
  const EvalReport r = sample_eval_report(true);
  const EvalReport e = bpm::parse_eval_report(bpm::to_record(r));
  CHECK(e.n == r.n);
  CHECK(e.delta == r.delta);
  CHECK(e.ensemble == r.ensemble);
  CHECK(e.eval.test_count == r.eval.test_count);
  CHECK(e.eval.eps_gibbs == r.eval.eps_gibbs);
  CHECK(e.eval.eps_bayes == r.eval.eps_bayes);
  CHECK(e.eval.eps_bpm == r.eval.eps_bpm);
  CHECK(e.eval.delta_approx == r.eval.delta_approx);
  CHECK(e.eval.alpha_gibbs == r.eval.alpha_gibbs);
  CHECK(e.eval.bayes_tie_count == r.eval.bayes_tie_count);
  CHECK(e.seed == r.seed);
  REQUIRE(e.err_bpm_com.has_value());
  CHECK(*e.err_bpm_com == 0.15);

  const EvalReport bare =
      bpm::parse_eval_report(bpm::to_record(sample_eval_report(false)));
  CHECK_FALSE(bare.err_bpm_com.has_value());
}

TEST_CASE("report: schema violations are typed errors") {
  const std::string bounds_rec = bpm::to_record(sample_bound_report(false));
  const std::string eval_rec = bpm::to_record(sample_eval_report(false));

  // wrong record kind
  CHECK_THROWS_AS((void)bpm::parse_eval_report(bounds_rec), bpm::SchemaError);
  CHECK_THROWS_AS((void)bpm::parse_bound_report(eval_rec), bpm::SchemaError);

  // stripped required key
  std::string crippled = bounds_rec;
  const auto pos = crippled.find("\"kl_iso\"");
  REQUIRE(pos != std::string::npos);
  crippled.replace(pos, 8, "\"kl_oso\"");
  CHECK_THROWS_AS((void)bpm::parse_bound_report(crippled), bpm::SchemaError);

  // not JSON at all
  CHECK_THROWS_AS((void)bpm::parse_bound_report("not json"), bpm::SchemaError);
  CHECK_THROWS_AS((void)bpm::parse_bound_report("[1,2,3]"), bpm::SchemaError);
}

TEST_CASE("report: append builds a readable JSONL log") {
  const std::string path = (temp_dir() / "log.jsonl").string();
  fs::remove(path);
  bpm::append_report(path, sample_bound_report(true));
  bpm::append_report(path, sample_bound_report(false));

  const auto lines = split_lines(read_file(path));
  REQUIRE(lines.size() == 2);
  CHECK(bpm::parse_bound_report(lines[0]).log_inv_py.has_value());
  CHECK_FALSE(bpm::parse_bound_report(lines[1]).log_inv_py.has_value());
}

TEST_CASE("report: bounds CSV layout is stable") {
  const std::string path = (temp_dir() / "bounds.csv").string();
  bpm::write_bounds_csv(path,
                        {sample_bound_report(true), sample_bound_report(false)});
  const auto lines = split_lines(read_file(path));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "n,delta,kl_iso,gibbs_bound,bpm_bound_centroid,bpm_centroid_vacuous,"
        "bpm_bound_com,bpm_bound_com_conservative,log_inv_py,log_inv_py_se,"
        "orthant_method,orthant_draws,rademacher_bound,rademacher_vacuous,"
        "c_bound,jitter_used,seed");

  const auto full = split_csv(lines[1]);
  REQUIRE(full.size() == 17);
  CHECK(full[0] == "64");
  CHECK(full[5] == "1");  // centroid bound 1.392703 is vacuous
  CHECK(full[10] == "ghk");
  CHECK(full[13] == "1");  // rademacher 2.718 exceeds 1: flagged vacuous

  const auto bare = split_csv(lines[2]);
  REQUIRE(bare.size() == 17);
  for (const int empty_cell : {6, 7, 8, 9, 10, 11, 14}) {
    CHECK(bare[static_cast<std::size_t>(empty_cell)].empty());
  }

  // byte-stable across reruns
  const std::string again = (temp_dir() / "bounds2.csv").string();
  bpm::write_bounds_csv(again,
                        {sample_bound_report(true), sample_bound_report(false)});
  CHECK(read_file(path) == read_file(again));
}

TEST_CASE("report: eval CSV layout is stable") {
  const std::string path = (temp_dir() / "eval.csv").string();
  bpm::write_eval_csv(path,
                      {sample_eval_report(true), sample_eval_report(false)});
  const auto lines = split_lines(read_file(path));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "n,delta,ensemble,test_count,eps_gibbs,eps_bayes,eps_bpm,delta_approx,"
        "alpha_gibbs,bayes_ties,err_bpm_com,jitter_used,seed");
  const auto full = split_csv(lines[1]);
  REQUIRE(full.size() == 13);
  CHECK(full[10] == "0.14999999999999999");
  const auto bare = split_csv(lines[2]);
  REQUIRE(bare.size() == 13);
  CHECK(bare[10].empty());
}

TEST_CASE("report: double rendering roundtrips and is frozen") {
  CHECK(bpm::format_double(0.1) == "0.10000000000000001");
  for (const double v : {1.0 / 3.0, 1e300, 1e-300, 0.0, -2.5, 42.0}) {
    CHECK(std::stod(bpm::format_double(v)) == v);
  }
}

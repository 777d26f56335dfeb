#include "bpm/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace bpm {

namespace {

using nlohmann::json;

json orthant_to_json(const OrthantEstimate& e) {
  return json{{"log_inv_py", e.log_inv_py},
              {"std_error", e.std_error},
              {"method", e.method == OrthantMethod::ghk ? "ghk" : "naive_mc"},
              {"draws", e.draws},
              {"hits", e.hits},
              {"ok", e.ok}};
}

OrthantEstimate orthant_from_json(const json& j) {
  OrthantEstimate e;
  e.log_inv_py = j.at("log_inv_py").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.method = j.at("method").get<std::string>() == "ghk"
                 ? OrthantMethod::ghk
                 : OrthantMethod::naive_mc;
  e.draws = j.at("draws").get<std::int64_t>();
  e.hits = j.at("hits").get<std::int64_t>();
  e.ok = j.at("ok").get<bool>();
  return e;
}

json parse_line(const std::string& line, const char* expected_record) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("report: not a valid record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("record") ||
      j["record"] != expected_record) {
    throw SchemaError(std::string("report: expected a '") + expected_record +
                      "' record");
  }
  return j;
}

void append_line(const std::string& path, const std::string& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("report: cannot open " + path);
  out << line << '\n';
  if (!out) throw std::runtime_error("report: write failed on " + path);
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_record(const BoundReport& r) {
  json j{{"record", "bounds"},
         {"n", r.n},
         {"delta", r.delta},
         {"kl_iso", r.kl_iso},
         {"gibbs_bound", r.gibbs_bound},
         {"bpm_bound_centroid", r.bpm_bound_centroid},
         {"rademacher_bound", r.rademacher_bound},
         // the Rademacher value omits the usual confidence term, matching
         // the comparison it reproduces
         {"rademacher_confidence_term", "omitted"},
         {"jitter_used", r.jitter_used},
         {"seed", r.seed}};
  if (r.log_inv_py) j["log_inv_py"] = orthant_to_json(*r.log_inv_py);
  if (r.bpm_bound_com) {
    j["bpm_bound_com"] = json{{"value", r.bpm_bound_com->value},
                              {"conservative", r.bpm_bound_com->conservative}};
  }
  if (r.c_bound) j["c_bound"] = *r.c_bound;
  return j.dump();
}

std::string to_record(const EvalReport& r) {
  json j{{"record", "eval"},
         {"n", r.n},
         {"delta", r.delta},
         {"ensemble", r.ensemble},
         {"test_count", r.eval.test_count},
         {"eps_gibbs", r.eval.eps_gibbs},
         {"eps_bayes", r.eval.eps_bayes},
         {"eps_bpm", r.eval.eps_bpm},
         {"delta_approx", r.eval.delta_approx},
         {"alpha_gibbs", r.eval.alpha_gibbs},
         {"bayes_ties", r.eval.bayes_tie_count},
         {"jitter_used", r.jitter_used},
         {"seed", r.seed}};
  if (r.err_bpm_com) j["err_bpm_com"] = *r.err_bpm_com;
  return j.dump();
}

BoundReport parse_bound_report(const std::string& line) {
  const json j = parse_line(line, "bounds");
  BoundReport r;
  try {
    r.n = j.at("n").get<int>();
    r.delta = j.at("delta").get<double>();
    r.kl_iso = j.at("kl_iso").get<double>();
    r.gibbs_bound = j.at("gibbs_bound").get<double>();
    r.bpm_bound_centroid = j.at("bpm_bound_centroid").get<double>();
    r.rademacher_bound = j.at("rademacher_bound").get<double>();
    r.jitter_used = j.at("jitter_used").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("log_inv_py")) {
      r.log_inv_py = orthant_from_json(j.at("log_inv_py"));
    }
    if (j.contains("bpm_bound_com")) {
      BpmComBound b;
      b.value = j.at("bpm_bound_com").at("value").get<double>();
      b.conservative = j.at("bpm_bound_com").at("conservative").get<double>();
      r.bpm_bound_com = b;
    }
    if (j.contains("c_bound")) r.c_bound = j.at("c_bound").get<double>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bounds record: ") + e.what());
  }
  return r;
}

EvalReport parse_eval_report(const std::string& line) {
  const json j = parse_line(line, "eval");
  EvalReport r;
  try {
    r.n = j.at("n").get<int>();
    r.delta = j.at("delta").get<double>();
    r.ensemble = j.at("ensemble").get<int>();
    r.eval.test_count = j.at("test_count").get<int>();
    r.eval.eps_gibbs = j.at("eps_gibbs").get<double>();
    r.eval.eps_bayes = j.at("eps_bayes").get<double>();
    r.eval.eps_bpm = j.at("eps_bpm").get<double>();
    r.eval.delta_approx = j.at("delta_approx").get<double>();
    r.eval.alpha_gibbs = j.at("alpha_gibbs").get<double>();
    r.eval.bayes_tie_count = j.at("bayes_ties").get<int>();
    r.jitter_used = j.at("jitter_used").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("err_bpm_com")) {
      r.err_bpm_com = j.at("err_bpm_com").get<double>();
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("eval record: ") + e.what());
  }
  return r;
}

void append_report(const std::string& path, const BoundReport& r) {
  append_line(path, to_record(r));
}

void append_report(const std::string& path, const EvalReport& r) {
  append_line(path, to_record(r));
}

void write_bounds_csv(const std::string& path,
                      const std::vector<BoundReport>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("report: cannot open " + path);
  out << "n,delta,kl_iso,gibbs_bound,bpm_bound_centroid,"
         "bpm_centroid_vacuous,bpm_bound_com,bpm_bound_com_conservative,"
         "log_inv_py,log_inv_py_se,orthant_method,orthant_draws,"
         "rademacher_bound,rademacher_vacuous,c_bound,jitter_used,seed\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.delta) << ','
        << format_double(r.kl_iso) << ',' << format_double(r.gibbs_bound)
        << ',' << format_double(r.bpm_bound_centroid) << ','
        << (vacuous(r.bpm_bound_centroid) ? "1" : "0") << ',';
    if (r.bpm_bound_com) {
      out << format_double(r.bpm_bound_com->value) << ','
          << format_double(r.bpm_bound_com->conservative) << ',';
    } else {
      out << ",,";
    }
    if (r.log_inv_py) {
      out << format_double(r.log_inv_py->log_inv_py) << ','
          << format_double(r.log_inv_py->std_error) << ','
          << (r.log_inv_py->method == OrthantMethod::ghk ? "ghk" : "naive_mc")
          << ',' << r.log_inv_py->draws << ',';
    } else {
      out << ",,,,";
    }
    out << format_double(r.rademacher_bound) << ','
        << (vacuous(r.rademacher_bound) ? "1" : "0") << ','
        << opt_cell(r.c_bound) << ',' << format_double(r.jitter_used) << ','
        << r.seed << '\n';
  }
  if (!out) throw std::runtime_error("report: write failed on " + path);
}

void write_eval_csv(const std::string& path,
                    const std::vector<EvalReport>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("report: cannot open " + path);
  out << "n,delta,ensemble,test_count,eps_gibbs,eps_bayes,eps_bpm,"
         "delta_approx,alpha_gibbs,bayes_ties,err_bpm_com,jitter_used,seed\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.delta) << ',' << r.ensemble << ','
        << r.eval.test_count << ',' << format_double(r.eval.eps_gibbs) << ','
        << format_double(r.eval.eps_bayes) << ','
        << format_double(r.eval.eps_bpm) << ','
        << format_double(r.eval.delta_approx) << ','
        << format_double(r.eval.alpha_gibbs) << ',' << r.eval.bayes_tie_count
        << ',' << opt_cell(r.err_bpm_com) << ','
        << format_double(r.jitter_used) << ',' << r.seed << '\n';
  }
  if (!out) throw std::runtime_error("report: write failed on " + path);
}

}  // namespace bpm

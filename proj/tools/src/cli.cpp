#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "angof/critical_values.hpp"
#include "angof/datagen.hpp"
#include "angof/error.hpp"
#include "angof/experiments.hpp"
#include "angof/table_io.hpp"

namespace angof::cli {

namespace {

using json = nlohmann::ordered_json;

int exit_code(ErrorClass c);

int exit_code_for(const std::string& cls) {
  for (ErrorClass c : {ErrorClass::Domain, ErrorClass::Numerical, ErrorClass::Degenerate, ErrorClass::Unsupported,
                       ErrorClass::Io, ErrorClass::Config}) {
    if (to_string(c) == cls) return exit_code(c);
  }
  return 1;
}

// Raw option values as typed; validated in one pass so every problem is
// reported together.
struct Options {
  std::string family = "logistic";
  std::string p = "2";
  int k = 0;
  std::string k_rule = "sqrt";
  std::string q = "invsqrt";
  int B = 0;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::string grid = "desk";
  std::string cache;
  std::string out;
  unsigned threads = 0;

  std::string input;
  std::string x_col;
  std::string y_col;

  int scenario = 1;
  std::string lambdas = "0";
  double lambda = 0.0;
  int n = 3000;
  int reps = 100;

  std::string r_grid;
  std::string r_range;
  std::string alphas = "0.10,0.05,0.01";

  std::string pairs = "danube";
};

struct Resolved {
  TestConfig test;
  double alpha = 0.05;
};

std::vector<double> parse_list(const std::string& text, const std::string& what, std::vector<std::string>& errors) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      errors.push_back("cannot parse '" + item + "' in " + what);
    }
  }
  if (out.empty()) errors.push_back(what + " is empty");
  return out;
}

Resolved resolve(const Options& o, int default_B, std::vector<std::string>& errors) {
  Resolved r;
  auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  };
  attempt([&] { r.test.family = parse_family(o.family); });
  attempt([&] { r.test.p = PNorm::parse(o.p); });
  attempt([&] { r.test.q = parse_weight_kind(o.q); });
  attempt([&] { r.test.grid = grid_preset(o.grid); });
  if (o.k < 0) errors.push_back("--k must be positive");
  if (o.k_rule != "sqrt") errors.push_back("--k-rule must be 'sqrt'");
  r.test.k = o.k;
  if (o.B < 0) errors.push_back("--B must be positive");
  r.test.B = o.B > 0 ? o.B : default_B;
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) errors.push_back("--alpha must lie in (0, 1)");
  r.alpha = o.alpha;
  r.test.seed = o.seed;
  r.test.threads = o.threads;
  if (r.test.p.is_infinite()) errors.push_back("--p inf is not supported by the limit-law simulator");
  return r;
}

void fail_if(const std::vector<std::string>& errors) {
  if (errors.empty()) return;
  std::string msg;
  for (std::size_t j = 0; j < errors.size(); ++j) msg += (j ? "; " : "") + errors[j];
  throw ConfigError(msg);
}

int default_B(const std::string& grid) { return grid == "paper" ? 2000 : 500; }

json grid_json(const FieldGrid& g) {
  return json{{"h", g.h}, {"M", g.M}, {"N", g.N}, {"tails", g.tails}, {"rule", to_string(g.rule)}};
}

json config_json(const TestConfig& c, const std::string& grid_name) {
  return json{{"family", to_string(c.family)},
              {"p", c.p.to_string()},
              {"k", c.k == 0 ? json("sqrt") : json(c.k)},
              {"q", to_string(c.q)},
              {"B", c.B},
              {"seed", c.seed},
              {"grid_preset", grid_name},
              {"grid", grid_json(c.grid)}};
}

json report_json(const TestReport& r) {
  json j{{"status", to_string(r.status)}};
  if (r.status != TestStatus::Ok) {
    j["error_class"] = r.error_class;
    j["message"] = r.message;
  }
  j["n"] = r.fit.n;
  j["k"] = r.fit.k;
  j["K"] = r.fit.K;
  j["ties"] = r.fit.ties;
  j["negative_weights"] = r.fit.negative_weights;
  j["ell_hat_11"] = r.fit.ell_hat;
  j["r_hat"] = r.fit.r_hat.r;
  j["r_hat_clamped"] = r.fit.r_clamped;
  j["statistic"] = r.fit.statistic;
  j["p_value"] = r.p_value;
  j["critical_values"] = json{{"0.90", r.crit90}, {"0.95", r.crit95}, {"0.99", r.crit99}};
  j["table_clamped"] = r.table_clamped;
  j["seed"] = r.seed;
  return j;
}

// Writes to --out, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::optional<CriticalValueTable> load_cache(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  return load_table(path);
}

void check_cache(const CriticalValueTable& t, const TestConfig& c) {
  std::vector<std::string> errors;
  if (t.family != c.family) errors.push_back("cache family differs");
  if (t.p.to_string() != c.p.to_string()) errors.push_back("cache p differs");
  if (t.q != c.q) errors.push_back("cache weight differs");
  if (t.grid.M != c.grid.M || t.grid.N != c.grid.N || t.grid.h != c.grid.h) errors.push_back("cache grid differs");
  if (!errors.empty()) fail_if(errors);
}

json table_json(const CriticalValueTable& t) {
  return json{{"family", to_string(t.family)}, {"p", t.p.to_string()}, {"q", to_string(t.q)},
              {"grid", grid_json(t.grid)},     {"B", t.B},                {"seed", t.seed},
              {"r_grid", t.r_grid}};
}

int cmd_test(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  Resolved r = resolve(o, default_B(o.grid), errors);
  if (o.input.empty()) errors.push_back("--input is required");
  fail_if(errors);
  const DataTable data = read_csv(o.input);
  const std::size_t a = o.x_col.empty() ? 0 : data.column(o.x_col);
  const std::size_t b = o.y_col.empty() ? 1 : data.column(o.y_col);
  std::size_t dropped = 0;
  const BivariateSample s = pair_sample(data, a, b, &dropped);
  const auto cache = load_cache(o.cache);
  if (cache) check_cache(*cache, r.test);
  const TestReport rep = cache ? run_single_test(s, r.test, *cache) : run_single_test(s, r.test);
  if (rep.table_clamped) err << "warning: r_hat outside the cached r grid; nearest node used\n";
  json j{{"command", "test"},
         {"input", o.input},
         {"columns", json::array({data.names[a], data.names[b]})},
         {"dropped_rows", dropped},
         {"config", config_json(r.test, o.grid)},
         {"alpha", r.alpha},
         {"cache", o.cache.empty() ? json(nullptr) : json(o.cache)},
         {"report", report_json(rep)},
         {"reject", rep.status == TestStatus::Ok && rep.p_value <= r.alpha}};
  emit(o.out, j.dump(2) + "\n", out);
  if (rep.status == TestStatus::Degenerate) return exit_code(ErrorClass::Degenerate);
  if (rep.status == TestStatus::Failed) return exit_code_for(rep.error_class);
  return 0;
}

int cmd_power(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  Resolved r = resolve(o, default_B(o.grid), errors);
  PowerConfig pc;
  pc.test = r.test;
  pc.alpha = r.alpha;
  pc.scenario = o.scenario;
  pc.lambdas = parse_list(o.lambdas, "--lambdas", errors);
  for (double l : pc.lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) errors.push_back("mixture weights must lie in [0, 1]");
  }
  pc.n = o.n;
  pc.reps = o.reps;
  if (o.scenario != 1 && o.scenario != 2) errors.push_back("--scenario must be 1 or 2");
  if (o.n < 3) errors.push_back("--n must be at least 3");
  if (o.reps < 1) errors.push_back("--reps must be at least 1");
  if (o.k > o.n) errors.push_back("--k must not exceed --n");
  fail_if(errors);
  const auto cache = load_cache(o.cache);
  if (cache) check_cache(*cache, r.test);
  const PowerCurve curve = run_power_study(pc, cache ? &*cache : nullptr);
  if (!cache && !o.cache.empty()) save_table(o.cache, curve.table);
  if (curve.table_clamped > 0) {
    err << "warning: " << curve.table_clamped << " replicates had r_hat outside the r grid\n";
  }

  std::ostringstream csv;
  csv << "lambda,rate,se,reps,failed,rejections,mean_r_hat\n";
  for (const auto& pt : curve.points) {
    csv << format_real(pt.lambda) << "," << format_real(pt.rate) << "," << format_real(pt.se) << "," << pt.reps
        << "," << pt.failed << "," << pt.rejections << "," << format_real(pt.mean_r_hat) << "\n";
  }
  json points = json::array();
  for (std::size_t l = 0; l < curve.points.size(); ++l) {
    json reps = json::array();
    for (const auto& rr : curve.replicates[l]) {
      reps.push_back(json{{"status", to_string(rr.status)},
                          {"r_hat", rr.r_hat},
                          {"statistic", rr.statistic},
                          {"critical", rr.critical},
                          {"p_value", rr.p_value},
                          {"reject", rr.reject}});
    }
    points.push_back(json{{"lambda", curve.points[l].lambda}, {"rate", curve.points[l].rate}, {"replicates", reps}});
  }
  json meta{{"command", "power"},
            {"config", config_json(r.test, o.grid)},
            {"alpha", r.alpha},
            {"scenario", o.scenario},
            {"n", o.n},
            {"reps", o.reps},
            {"null_copula", describe(null_copula(r.test.family))},
            {"table", table_json(curve.table)},
            {"cache", o.cache.empty() ? json(nullptr) : json(o.cache)},
            {"points", points}};
  if (o.out.empty() || o.out == "-") {
    out << csv.str();
  } else {
    emit(o.out, csv.str(), out);
    emit(o.out + ".json", meta.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_quantiles(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<std::string> errors;
  Resolved r = resolve(o, default_B(o.grid), errors);
  std::vector<double> grid;
  if (!o.r_grid.empty()) {
    grid = parse_list(o.r_grid, "--r-grid", errors);
  } else if (!o.r_range.empty()) {
    const auto range = parse_list(o.r_range, "--r-range", errors);
    if (range.size() != 2) {
      errors.push_back("--r-range needs two values lo,hi");
    } else {
      try {
        grid = covering_r_grid(r.test.family, range[0], range[1]);
      } catch (const std::exception& e) {
        errors.emplace_back(e.what());
      }
    }
  } else {
    errors.push_back("one of --r-grid or --r-range is required");
  }
  const std::vector<double> alphas = parse_list(o.alphas, "--alphas", errors);
  if (o.out.empty()) errors.push_back("--out (cache file path) is required");
  fail_if(errors);
  // Same table seed as `power` with the same --seed, so a cache and an
  // uncached run agree on every shared node.
  const CriticalValueTable t = critical_value_table(r.test.family, r.test.p, r.test.grid, r.test.q, grid, alphas,
                                                    r.test.B, table_seed(r.test.seed), r.test.threads);
  save_table(o.out, t);
  json j{{"command", "quantiles"}, {"out", o.out}, {"table", table_json(t)}, {"quantiles", json::array()}};
  for (std::size_t k = 0; k < t.r_grid.size(); ++k) {
    json row{{"r", t.r_grid[k]}};
    for (double level : t.levels) row[format_real(level)] = quantile(t.draws[k], level);
    j["quantiles"].push_back(row);
  }
  out << j.dump(2) << "\n";
  return 0;
}

std::vector<PairSpec> parse_pairs(const std::string& text, std::vector<std::string>& errors) {
  if (text == "danube") return danube_pairs();
  std::vector<PairSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == item.size()) {
      errors.push_back("pair '" + item + "' is not of the form a-b");
      continue;
    }
    out.push_back({item.substr(0, dash), item.substr(dash + 1)});
  }
  if (out.empty()) errors.push_back("--pairs is empty");
  return out;
}

int cmd_pairs(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  Resolved r = resolve(o, 4000, errors);
  if (o.input.empty()) errors.push_back("--input is required");
  const std::vector<PairSpec> pairs = parse_pairs(o.pairs, errors);
  fail_if(errors);
  const DataTable data = read_csv(o.input);
  const auto cache = load_cache(o.cache);
  if (cache) check_cache(*cache, r.test);
  const MultiTestReport rep = run_pairwise_analysis(data, pairs, r.test, r.alpha, cache ? &*cache : nullptr);

  std::ostringstream csv;
  csv << "pair,status,n,k,K,r_hat,statistic,p_value,bonferroni,bh,by\n";
  json rows = json::array();
  for (const auto& pr : rep.pairs) {
    const TestReport& t = pr.report;
    csv << pr.label << "," << to_string(t.status) << "," << t.fit.n << "," << t.fit.k << "," << t.fit.K << ","
        << format_real(t.fit.r_hat.r) << "," << format_real(t.fit.statistic) << "," << format_real(t.p_value)
        << "," << pr.bonferroni << "," << pr.bh << "," << pr.by << "\n";
    if (t.table_clamped) err << "warning: pair " << pr.label << " has r_hat outside the cached r grid\n";
    json row{{"pair", pr.label}, {"dropped_rows", pr.dropped}, {"report", report_json(t)},
             {"bonferroni", pr.bonferroni}, {"bh", pr.bh}, {"by", pr.by}};
    rows.push_back(row);
  }
  json summary{{"command", "pairs"},
               {"input", o.input},
               {"config", config_json(r.test, o.grid)},
               {"alpha", r.alpha},
               {"tested", rep.tested},
               {"cache", o.cache.empty() ? json(nullptr) : json(o.cache)},
               {"pairs", rows}};
  if (o.out.empty() || o.out == "-") {
    out << csv.str();
  } else {
    emit(o.out, csv.str(), out);
    emit(o.out + ".json", summary.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<std::string> errors;
  Family f = Family::Logistic;
  try {
    f = parse_family(o.family);
  } catch (const std::exception& e) {
    errors.emplace_back(e.what());
  }
  if (o.scenario != 1 && o.scenario != 2) errors.push_back("--scenario must be 1 or 2");
  if (!(o.lambda >= 0.0 && o.lambda <= 1.0)) errors.push_back("--lambda must lie in [0, 1]");
  if (o.n < 1) errors.push_back("--n must be positive");
  fail_if(errors);
  const CopulaSpec spec = scenario(null_copula(f), o.scenario, o.lambda);
  const BivariateSample s = sample(spec, o.n, o.seed);
  std::ostringstream csv;
  csv << "u,v\n";
  for (std::size_t i = 0; i < s.size(); ++i) csv << format_real(s.x1[i]) << "," << format_real(s.x2[i]) << "\n";
  emit(o.out, csv.str(), out);
  return 0;
}

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::Domain: return 2;
    case ErrorClass::Numerical: return 3;
    case ErrorClass::Degenerate: return 4;
    case ErrorClass::Unsupported: return 5;
    case ErrorClass::Io: return 6;
    case ErrorClass::Config: return 7;
  }
  return 1;
}

void report_error(std::ostream& err, std::string_view cls, const std::string& msg) {
  err << json{{"error", cls}, {"message", msg}}.dump() << "\n";
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "Model family: logistic or hr")->capture_default_str();
  sub->add_option("--p", o.p, "L_p exponent (real >= 1; inf is rejected by the simulator)")->capture_default_str();
  sub->add_option("--k", o.k, "Number of upper order statistics (default: k rule)");
  sub->add_option("--k-rule", o.k_rule, "Rule for k when --k is absent")->capture_default_str();
  sub->add_option("--q", o.q, "Weight: const or invsqrt")->capture_default_str();
  sub->add_option("--B", o.B, "Limit-law draws (default 500 desk, 2000 paper, 4000 pairs)");
  sub->add_option("--alpha", o.alpha, "Test level")->capture_default_str();
  sub->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  sub->add_option("--grid", o.grid, "Limit-law grid preset: desk or paper")->capture_default_str();
  sub->add_option("--cache", o.cache, "Critical-value cache file");
  sub->add_option("--out", o.out, "Output path (default stdout)");
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goodness-of-fit tests for bivariate extremal dependence models"};
  app.require_subcommand(1);
  Options o;

  auto* test = app.add_subcommand("test", "Test one bivariate sample against a model family");
  add_common(test, o);
  test->add_option("--input", o.input, "CSV file with a header row");
  test->add_option("--x", o.x_col, "First column (name or 1-based number; default 1)");
  test->add_option("--y", o.y_col, "Second column (default 2)");

  auto* power = app.add_subcommand("power", "Rejection rates over mixture weights");
  add_common(power, o);
  power->add_option("--scenario", o.scenario, "1: comonotone alternative, 2: max-linear")->capture_default_str();
  power->add_option("--lambdas", o.lambdas, "Comma-separated mixture weights")->capture_default_str();
  power->add_option("--n", o.n, "Sample size")->capture_default_str();
  power->add_option("--reps", o.reps, "Replicates per weight")->capture_default_str();

  auto* quant = app.add_subcommand("quantiles", "Simulate a critical-value table and write the cache");
  add_common(quant, o);
  quant->add_option("--r-grid", o.r_grid, "Comma-separated r values");
  quant->add_option("--r-range", o.r_range, "lo,hi covered on the family pitch");
  quant->add_option("--alphas", o.alphas, "Comma-separated test levels")->capture_default_str();

  auto* pairs = app.add_subcommand("pairs", "Test many column pairs with multiple-testing corrections");
  add_common(pairs, o);
  pairs->add_option("--input", o.input, "CSV file with one column per station");
  pairs->add_option("--pairs", o.pairs, "'danube' or a list like 14-2,23-4")->capture_default_str();

  auto* gen = app.add_subcommand("generate", "Write a sample from a mixture scenario as CSV");
  gen->add_option("--family", o.family, "Null family: logistic (Gumbel 2) or hr (r = 1)")->capture_default_str();
  gen->add_option("--scenario", o.scenario, "1 or 2")->capture_default_str();
  gen->add_option("--lambda", o.lambda, "Mixture weight")->capture_default_str();
  gen->add_option("--n", o.n, "Sample size")->capture_default_str();
  gen->add_option("--seed", o.seed, "Seed")->capture_default_str();
  gen->add_option("--out", o.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, to_string(ErrorClass::Config), e.what());
    return exit_code(ErrorClass::Config);
  }

  try {
    if (*test) return cmd_test(o, out, err);
    if (*power) return cmd_power(o, out, err);
    if (*quant) return cmd_quantiles(o, out, err);
    if (*pairs) return cmd_pairs(o, out, err);
    if (*gen) return cmd_generate(o, out, err);
  } catch (const Error& e) {
    report_error(err, to_string(e.error_class()), e.what());
    return exit_code(e.error_class());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return 1;
  }
  return 1;
}

}  // namespace angof::cli

#include "angof/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "angof/multiple_testing.hpp"
#include "angof/parallel.hpp"
#include "angof/rng.hpp"
#include "angof/wasserstein.hpp"

namespace angof {

void validate_config(const TestConfig& c) {
  std::ostringstream os;
  if (c.k < 0) os << "k must be >= 1 (or 0 for the sqrt rule); ";
  if (c.B < 1) os << "B must be >= 1; ";
  if (c.p.is_infinite()) os << "p = inf is not supported by the limit-law simulator; ";
  try {
    validate_grid(c.grid);
  } catch (const Error& e) {
    os << e.what() << "; ";
  }
  if (!os.str().empty()) throw ConfigError(os.str());
}

std::string to_string(TestStatus s) {
  switch (s) {
    case TestStatus::Ok: return "ok";
    case TestStatus::Degenerate: return "degenerate";
    case TestStatus::Failed: return "failed";
  }
  return "failed";
}

Fit fit_statistic(const BivariateSample& s, Family family, int k, PNorm p, WeightKind q) {
  validate_sample(s);
  const Ranks ranks = compute_ranks(s);
  const int n = ranks.n();
  if (k == 0) k = k_sqrt_rule(n);
  const AngularDataset d = [&] {
    AngularDataset raw = select_exceedances(ranks, k, p);
    if (raw.degenerate()) throw DegenerateDataError("fewer than 2 exceedances");
    const EuclideanWeights w = euclidean_weights(raw.angles, p);
    raw.weights = w.weights;
    raw.negative_weights = w.any_negative;
    return raw;
  }();
  Fit f;
  f.n = n;
  f.k = k;
  f.K = d.K();
  f.ties = ranks.ties1 + ranks.ties2;
  f.negative_weights = d.negative_weights;
  f.ell_hat = empirical_stdf(ranks, k, 1.0, 1.0);
  const ParamEstimate est = estimate_param(family, f.ell_hat);
  f.r_hat = est.params;
  f.r_clamped = est.clamped;
  const AngularModel model(f.r_hat, p);
  f.statistic = test_statistic(d, model, q).value;
  return f;
}

namespace {

template <class Body>
TestReport guarded(const TestConfig& c, Body&& body) {
  TestReport rep;
  rep.seed = c.seed;
  try {
    body(rep);
    rep.status = TestStatus::Ok;
  } catch (const DegenerateDataError& e) {
    rep.status = TestStatus::Degenerate;
    rep.error_class = to_string(e.error_class());
    rep.message = e.what();
  } catch (const Error& e) {
    rep.status = TestStatus::Failed;
    rep.error_class = to_string(e.error_class());
    rep.message = e.what();
  }
  return rep;
}

}  // namespace

TestReport run_single_test(const BivariateSample& s, const TestConfig& c) {
  validate_config(c);
  return guarded(c, [&](TestReport& rep) {
    rep.fit = fit_statistic(s, c.family, c.k, c.p, c.q);
    const LimitLawPlan plan(rep.fit.r_hat, c.p, c.grid, c.q, c.threads);
    const LimitLawDraws d = simulate_L(plan, c.B, c.seed, c.threads);
    rep.p_value = p_value(d, rep.fit.statistic);
    rep.crit90 = quantile(d, 0.90);
    rep.crit95 = quantile(d, 0.95);
    rep.crit99 = quantile(d, 0.99);
  });
}

TestReport run_single_test(const BivariateSample& s, const TestConfig& c, const CriticalValueTable& table) {
  validate_config(c);
  return guarded(c, [&](TestReport& rep) {
    if (table.family != c.family) throw ConfigError("critical-value table is for another model family");
    rep.fit = fit_statistic(s, c.family, c.k, c.p, c.q);
    const double r = rep.fit.r_hat.r;
    const TableLookup pv = table.p_value(r, rep.fit.statistic);
    rep.p_value = pv.value;
    rep.crit90 = table.quantile(r, 0.90).value;
    rep.crit95 = table.quantile(r, 0.95).value;
    rep.crit99 = table.quantile(r, 0.99).value;
    rep.table_clamped = pv.clamped;
  });
}

std::uint64_t data_seed(std::uint64_t seed, int rep) noexcept {
  return mix_seed(mix_seed(seed, 0xDA7Aull), static_cast<std::uint64_t>(rep));
}

std::uint64_t table_seed(std::uint64_t seed) noexcept { return mix_seed(seed, 0x7AB1Eull); }

PowerCurve run_power_study(const PowerConfig& c, const CriticalValueTable* table) {
  validate_config(c.test);
  if (c.lambdas.empty()) throw ConfigError("lambda grid is empty");
  if (c.reps < 1) throw ConfigError("replicate count must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (c.n < 3) throw ConfigError("sample size must be >= 3");
  if (table && table->family != c.test.family) throw ConfigError("critical-value table is for another model family");
  const CopulaSpec null = null_copula(c.test.family);
  const std::size_t L = c.lambdas.size();
  const std::size_t R = static_cast<std::size_t>(c.reps);

  PowerCurve out;
  out.replicates.assign(L, std::vector<ReplicateResult>(R));
  std::vector<CopulaSpec> specs;
  for (double lam : c.lambdas) specs.push_back(scenario(null, c.scenario, lam));

  parallel_for(L * R, c.test.threads, [&](std::size_t idx) {
    const std::size_t l = idx / R;
    const std::size_t j = idx % R;
    ReplicateResult& res = out.replicates[l][j];
    try {
      const BivariateSample s = sample(specs[l], c.n, data_seed(c.test.seed, static_cast<int>(j)));
      const Fit f = fit_statistic(s, c.test.family, c.test.k, c.test.p, c.test.q);
      res.status = TestStatus::Ok;
      res.r_hat = f.r_hat.r;
      res.statistic = f.statistic;
    } catch (const DegenerateDataError&) {
      res.status = TestStatus::Degenerate;
    } catch (const Error&) {
      res.status = TestStatus::Failed;
    }
  });

  if (table) {
    out.table = *table;
  } else {
    double lo = kInf;
    double hi = -kInf;
    for (const auto& row : out.replicates) {
      for (const auto& r : row) {
        if (r.status != TestStatus::Ok) continue;
        lo = std::min(lo, r.r_hat);
        hi = std::max(hi, r.r_hat);
      }
    }
    if (lo > hi) lo = hi = c.test.family == Family::Logistic ? 0.5 : 1.0;
    out.table = critical_value_table(c.test.family, c.test.p, c.test.grid, c.test.q,
                                     covering_r_grid(c.test.family, lo, hi), {0.10, 0.05, 0.01}, c.test.B,
                                     table_seed(c.test.seed), c.test.threads);
  }

  for (std::size_t l = 0; l < L; ++l) {
    PowerPoint pt;
    pt.lambda = c.lambdas[l];
    double sum_r = 0.0;
    for (auto& r : out.replicates[l]) {
      if (r.status != TestStatus::Ok) {
        ++pt.failed;
        continue;
      }
      const TableLookup crit = out.table.critical_value(r.r_hat, c.alpha);
      r.critical = crit.value;
      r.p_value = out.table.p_value(r.r_hat, r.statistic).value;
      r.reject = r.statistic > r.critical;
      if (crit.clamped) ++out.table_clamped;
      ++pt.reps;
      pt.rejections += r.reject ? 1 : 0;
      sum_r += r.r_hat;
    }
    if (pt.reps > 0) {
      pt.rate = static_cast<double>(pt.rejections) / pt.reps;
      pt.se = std::sqrt(pt.rate * (1.0 - pt.rate) / pt.reps);
      pt.mean_r_hat = sum_r / pt.reps;
    }
    out.points.push_back(pt);
  }
  return out;
}

MultiTestReport run_pairwise_analysis(const DataTable& data, const std::vector<PairSpec>& pairs,
                                      const TestConfig& c, double alpha, const CriticalValueTable* table) {
  validate_config(c);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (pairs.empty()) throw ConfigError("no pairs to analyse");
  MultiTestReport out;
  out.alpha = alpha;
  out.pairs.resize(pairs.size());
  std::vector<std::size_t> ca(pairs.size()), cb(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    ca[j] = data.column(pairs[j].a);
    cb[j] = data.column(pairs[j].b);
    out.pairs[j].label = pairs[j].a + "-" + pairs[j].b;
  }
  // With a shared table the pairs are cheap and run side by side; without
  // one each pair parallelises its own limit-law draws.
  const unsigned outer = table ? c.threads : 1;
  parallel_for(pairs.size(), outer, [&](std::size_t j) {
    TestConfig pc = c;
    pc.seed = mix_seed(c.seed, j);
    if (table) pc.threads = 1;
    PairResult& pr = out.pairs[j];
    const BivariateSample s = pair_sample(data, ca[j], cb[j], &pr.dropped);
    pr.report = table ? run_single_test(s, pc, *table) : run_single_test(s, pc);
  });

  std::vector<double> pv;
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < out.pairs.size(); ++j) {
    if (out.pairs[j].report.status != TestStatus::Ok) continue;
    pv.push_back(out.pairs[j].report.p_value);
    idx.push_back(j);
  }
  out.tested = static_cast<int>(pv.size());
  if (!pv.empty()) {
    const auto bon = bonferroni(pv, alpha);
    const auto bh = benjamini_hochberg(pv, alpha, false);
    const auto by = benjamini_hochberg(pv, alpha, true);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      out.pairs[idx[t]].bonferroni = bon[t];
      out.pairs[idx[t]].bh = bh[t];
      out.pairs[idx[t]].by = by[t];
    }
  }
  return out;
}

std::vector<PairSpec> danube_pairs() {
  static const int edges[30][2] = {{2, 1},   {13, 1},  {3, 2},   {14, 2},  {4, 3},   {5, 4},   {23, 4},  {25, 4},
                                   {6, 5},   {7, 6},   {8, 7},   {20, 7},  {9, 8},   {10, 9},  {11, 10}, {12, 11},
                                   {30, 13}, {15, 14}, {16, 15}, {17, 16}, {18, 17}, {19, 18}, {21, 20}, {22, 21},
                                   {24, 23}, {26, 25}, {27, 26}, {29, 28}, {31, 28}, {31, 30}};
  std::vector<PairSpec> out;
  for (const auto& e : edges) out.push_back({std::to_string(e[0]), std::to_string(e[1])});
  return out;
}

}  // namespace angof

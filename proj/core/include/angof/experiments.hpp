#pragma once

// Study orchestration: one goodness-of-fit test, power curves over mixture
// weights, and pairwise analyses of a multi-column table.

#include <cstdint>
#include <string>
#include <vector>

#include "angof/critical_values.hpp"
#include "angof/datagen.hpp"
#include "angof/empirical.hpp"
#include "angof/error.hpp"
#include "angof/limitlaw.hpp"
#include "angof/table_io.hpp"

namespace angof {

struct TestConfig {
  Family family = Family::Logistic;
  PNorm p = PNorm::finite(2.0);
  int k = 0;  // 0 selects k = round(sqrt(n))
  WeightKind q = WeightKind::InvSqrtQuarterPi;
  int B = 500;
  FieldGrid grid;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Lists every invalid field, throwing ConfigError if there is any.
void validate_config(const TestConfig& c);

/// Data-dependent part of a test: ranks, exceedances, weights, r_hat, T_n.
struct Fit {
  int n = 0;
  int k = 0;
  int K = 0;
  int ties = 0;
  bool negative_weights = false;
  double ell_hat = 0.0;
  ModelParams r_hat;
  bool r_clamped = false;
  double statistic = 0.0;
};

/// Throws DegenerateDataError when fewer than 2 exceedances remain or the
/// constraint function has no spread.
Fit fit_statistic(const BivariateSample& s, Family family, int k, PNorm p, WeightKind q);

enum class TestStatus { Ok, Degenerate, Failed };
std::string to_string(TestStatus s);

struct TestReport {
  TestStatus status = TestStatus::Failed;
  std::string error_class;  // empty when status is Ok
  std::string message;
  Fit fit;
  double p_value = 1.0;
  double crit90 = 0.0;
  double crit95 = 0.0;
  double crit99 = 0.0;
  bool table_clamped = false;
  std::uint64_t seed = 0;
};

/// Fresh B draws of the limit law at r_hat.
TestReport run_single_test(const BivariateSample& s, const TestConfig& c);
/// Critical values and p-value interpolated from a table.
TestReport run_single_test(const BivariateSample& s, const TestConfig& c, const CriticalValueTable& table);

struct PowerConfig {
  TestConfig test;
  int scenario = 1;                // 1: comonotone alternative, 2: max-linear
  std::vector<double> lambdas{0.0};
  int n = 3000;
  int reps = 100;
  double alpha = 0.05;
};

struct ReplicateResult {
  TestStatus status = TestStatus::Failed;
  double r_hat = 0.0;
  double statistic = 0.0;
  double critical = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

struct PowerPoint {
  double lambda = 0.0;
  int reps = 0;  // successful replicates
  int failed = 0;
  int rejections = 0;
  double rate = 0.0;
  double se = 0.0;
  double mean_r_hat = 0.0;
};

struct PowerCurve {
  std::vector<PowerPoint> points;
  std::vector<std::vector<ReplicateResult>> replicates;  // [lambda][rep]
  CriticalValueTable table;
  int table_clamped = 0;
};

/// Replicate j uses the same data seed at every lambda. Critical values
/// come from `table` when given, otherwise from a table over an r grid
/// covering the fitted values.
PowerCurve run_power_study(const PowerConfig& c, const CriticalValueTable* table = nullptr);

std::uint64_t data_seed(std::uint64_t seed, int rep) noexcept;
std::uint64_t table_seed(std::uint64_t seed) noexcept;

struct PairSpec {
  std::string a;  // column names or 1-based numbers
  std::string b;
};

struct PairResult {
  std::string label;  // "a-b"
  std::size_t dropped = 0;
  TestReport report;
  bool bonferroni = false;
  bool bh = false;
  bool by = false;  // BH for dependent tests
};

struct MultiTestReport {
  std::vector<PairResult> pairs;
  double alpha = 0.05;
  int tested = 0;  // pairs with a p-value; corrections use this m
};

/// Pair j tests with seed mix_seed(c.seed, j) unless a table is given.
MultiTestReport run_pairwise_analysis(const DataTable& data, const std::vector<PairSpec>& pairs,
                                      const TestConfig& c, double alpha,
                                      const CriticalValueTable* table = nullptr);

/// The 30 adjacent station pairs of the Danube network, by station number.
std::vector<PairSpec> danube_pairs();

}  // namespace angof

#pragma once

// Rank-based estimators: exceedances on the Pareto scale, pseudo-angles,
// the Euclidean-likelihood reweighting and the empirical stdf.

#include <cstddef>
#include <vector>

#include "angof/geometry.hpp"

namespace angof {

struct BivariateSample {
  std::vector<double> x1;
  std::vector<double> x2;

  std::size_t size() const noexcept { return x1.size(); }
};

/// Throws DomainError for NaN entries, unequal columns or n < 2.
void validate_sample(const BivariateSample& s);

struct Ranks {
  std::vector<int> r1;  // 1-based ranks of the first margin
  std::vector<int> r2;
  int ties1 = 0;  // observations tied with an earlier one
  int ties2 = 0;

  int n() const noexcept { return static_cast<int>(r1.size()); }
};

/// Marginal ranks; ties broken by order of appearance.
std::vector<int> rank_column(const std::vector<double>& column, int* ties = nullptr);
Ranks compute_ranks(const BivariateSample& s);

/// k = round(sqrt(n)), halves rounded up.
int k_sqrt_rule(int n);

/// Exceedance angles in [0, pi/2] with their probability weights.
struct AngularDataset {
  int n = 0;
  int k = 0;
  PNorm p = PNorm::finite(2.0);
  std::vector<double> angles;   // sorted ascending
  std::vector<double> weights;  // same order as angles
  bool negative_weights = false;
  int ties = 0;

  int K() const noexcept { return static_cast<int>(angles.size()); }
  bool degenerate() const noexcept { return angles.size() < 2; }
};

/// Observations with ||(1/a, 1/b)||_p >= 1/k, a = n + 1 - R1, b = n + 1 - R2,
/// and their angles atan(b / a). Weights start at 1/K. K = 0 is allowed.
AngularDataset select_exceedances(const Ranks& ranks, int k, PNorm p);

struct EuclideanWeights {
  std::vector<double> weights;
  bool any_negative = false;
};

/// Closed-form maximiser of the Euclidean likelihood under
/// sum p_j = 1 and sum p_j f(theta_j) = 0. Throws DegenerateDataError when
/// K < 2 or the f(theta_j) have zero variance.
EuclideanWeights euclidean_weights(const std::vector<double>& angles, PNorm p);

/// Exceedances plus Euclidean reweighting in one call.
AngularDataset angular_dataset(const BivariateSample& s, int k, PNorm p);

/// Right-continuous step CDF on [0, pi/2].
class StepCDF {
 public:
  StepCDF() = default;
  /// Sorts by location and merges equal locations.
  StepCDF(std::vector<double> locations, std::vector<double> masses);

  double operator()(double theta) const noexcept;

  const std::vector<double>& jumps() const noexcept { return jumps_; }
  /// cumulative()[i] is the value on [jumps()[i], jumps()[i+1]).
  const std::vector<double>& cumulative() const noexcept { return cum_; }
  double total() const noexcept { return cum_.empty() ? 0.0 : cum_.back(); }

 private:
  std::vector<double> jumps_;
  std::vector<double> cum_;
};

/// Q-tilde (reweighted) or Q-hat (uniform 1/K masses).
StepCDF empirical_angular_cdf(const AngularDataset& d, bool reweighted = true);

/// (1/k) #{i : R_i1 > n + 1/2 - k x1 or R_i2 > n + 1/2 - k x2}.
double empirical_stdf(const Ranks& ranks, int k, double x1, double x2);

}  // namespace angof

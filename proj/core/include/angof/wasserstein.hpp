#pragma once

// Weighted L1 (Wasserstein) distance between angular distribution functions
// and the test statistic T_n built on it.

#include <functional>

#include "angof/empirical.hpp"
#include "angof/geometry.hpp"
#include "angof/models.hpp"

namespace angof {

using CdfFn = std::function<double(double)>;

/// int_0^{pi/2} |F - G| q dtheta for a step F and a continuous nondecreasing
/// G. Cells are split at the jumps of F, at pi/4 and where G crosses the
/// level of F; `cells` receives the number of integration cells.
double weighted_l1_distance(const StepCDF& F, const CdfFn& G, WeightKind q, int* cells = nullptr);

/// Exact distance between two step CDFs.
double weighted_l1_distance(const StepCDF& F, const StepCDF& G, WeightKind q);

struct TestStatistic {
  double value = 0.0;  // sqrt(k) * distance
  int k = 0;
  WeightKind q = WeightKind::Constant;
  int cells = 0;
};

/// T_n = sqrt(k) * d(Q-tilde, Q_{p, r_hat}); the model carries r_hat.
TestStatistic test_statistic(const AngularDataset& d, const AngularModel& model, WeightKind q);

}  // namespace angof

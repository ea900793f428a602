#pragma once

// Limit-law quantiles on a grid of r values, interpolated linearly in r.

#include <cstdint>
#include <string>
#include <vector>

#include "angof/limitlaw.hpp"

namespace angof {

struct TableLookup {
  double value = 0.0;
  bool clamped = false;  // r outside the grid; the nearest node was used
};

struct CriticalValueTable {
  Family family = Family::Logistic;
  PNorm p = PNorm::finite(2.0);
  FieldGrid grid;
  WeightKind q = WeightKind::Constant;
  int B = 0;
  std::uint64_t seed = 0;
  std::vector<double> r_grid;               // ascending
  std::vector<double> levels;               // quantile levels, e.g. 0.95
  std::vector<std::vector<double>> draws;   // per node, sorted ascending

  /// Quantile at `level` (need not be one of `levels`), interpolated in r.
  TableLookup quantile(double r, double level) const;
  /// Critical value for a test at size alpha: quantile(r, 1 - alpha).
  TableLookup critical_value(double r, double alpha) const { return quantile(r, 1.0 - alpha); }
  TableLookup p_value(double r, double t) const;
};

/// Seed used for the node at r: depends only on (seed, r), so tables over
/// overlapping grids agree on shared nodes.
std::uint64_t node_seed(std::uint64_t seed, double r) noexcept;

/// Pitch of r grids: 0.05 for logistic, 0.1 for Husler-Reiss.
double r_grid_pitch(Family f) noexcept;

/// Nodes on the family pitch covering [lo, hi], kept inside the range
/// where the limit law is defined.
std::vector<double> covering_r_grid(Family f, double lo, double hi);

CriticalValueTable critical_value_table(Family family, PNorm p, const FieldGrid& grid, WeightKind q,
                                        const std::vector<double>& r_grid, const std::vector<double>& alphas,
                                        int B, std::uint64_t seed, unsigned threads = 0);

}  // namespace angof

#include "angof/critical_values.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "angof/error.hpp"
#include "angof/rng.hpp"

namespace angof {

namespace {

// Index of the left node of the bracketing interval and the weight of the
// right node.
struct Bracket {
  std::size_t lo;
  double w;
  bool clamped;
};

Bracket bracket(const std::vector<double>& grid, double r) {
  if (grid.empty()) throw DomainError("critical-value table has no nodes");
  if (grid.size() == 1) return {0, 0.0, r != grid.front()};
  if (r <= grid.front()) return {0, 0.0, r < grid.front()};
  if (r >= grid.back()) return {grid.size() - 2, 1.0, r > grid.back()};
  const auto it = std::upper_bound(grid.begin(), grid.end(), r);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  return {lo, (r - grid[lo]) / (grid[hi] - grid[lo]), false};
}

}  // namespace

TableLookup CriticalValueTable::quantile(double r, double level) const {
  const Bracket b = bracket(r_grid, r);
  const double q0 = angof::quantile(draws[b.lo], level);
  if (b.w == 0.0) return {q0, b.clamped};
  const double q1 = angof::quantile(draws[b.lo + 1], level);
  return {(1.0 - b.w) * q0 + b.w * q1, b.clamped};
}

TableLookup CriticalValueTable::p_value(double r, double t) const {
  const Bracket b = bracket(r_grid, r);
  const double p0 = angof::p_value(draws[b.lo], t);
  if (b.w == 0.0) return {p0, b.clamped};
  const double p1 = angof::p_value(draws[b.lo + 1], t);
  return {(1.0 - b.w) * p0 + b.w * p1, b.clamped};
}

std::uint64_t node_seed(std::uint64_t seed, double r) noexcept {
  return mix_seed(seed, std::bit_cast<std::uint64_t>(r));
}

double r_grid_pitch(Family f) noexcept { return f == Family::Logistic ? 0.05 : 0.1; }

std::vector<double> covering_r_grid(Family f, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("covering_r_grid needs lo <= hi");
  const double pitch = r_grid_pitch(f);
  // Nodes where the plan is well conditioned.
  const double min_node = pitch;
  const double max_node = f == Family::Logistic ? 1.0 - pitch : 5.0;
  const long first = static_cast<long>(std::floor(std::clamp(lo, min_node, max_node) / pitch + 1e-9));
  const long last = static_cast<long>(std::ceil(std::clamp(hi, min_node, max_node) / pitch - 1e-9));
  std::vector<double> grid;
  for (long j = first; j <= last; ++j) {
    // Round so that nodes print and re-read as short decimals.
    grid.push_back(std::round(j * pitch * 1e9) / 1e9);
  }
  return grid;
}

CriticalValueTable critical_value_table(Family family, PNorm p, const FieldGrid& grid, WeightKind q,
                                        const std::vector<double>& r_grid, const std::vector<double>& alphas,
                                        int B, std::uint64_t seed, unsigned threads) {
  if (r_grid.empty()) throw ConfigError("r grid is empty");
  if (!std::is_sorted(r_grid.begin(), r_grid.end()) ||
      std::adjacent_find(r_grid.begin(), r_grid.end()) != r_grid.end()) {
    throw ConfigError("r grid must be strictly increasing");
  }
  if (B < 1) throw ConfigError("B must be at least 1");
  CriticalValueTable t;
  t.family = family;
  t.p = p;
  t.grid = grid;
  t.q = q;
  t.B = B;
  t.seed = seed;
  t.r_grid = r_grid;
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha levels must lie in (0, 1)");
    t.levels.push_back(1.0 - a);
  }
  for (double r : r_grid) {
    const ModelParams m{family, r};
    validate_params(m);
    const LimitLawPlan plan(m, p, grid, q, threads);
    LimitLawDraws d = simulate_L(plan, B, node_seed(seed, r), threads);
    std::sort(d.values.begin(), d.values.end());
    t.draws.push_back(std::move(d.values));
  }
  return t;
}

}  // namespace angof

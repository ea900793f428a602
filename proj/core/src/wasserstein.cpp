#include "angof/wasserstein.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <vector>

#include "angof/error.hpp"
#include "angof/quadrature.hpp"

namespace angof {

namespace {

std::vector<double> cell_edges(const std::vector<double>& jumps) {
  std::vector<double> edges{0.0, kQuarterPi, kHalfPi};
  for (double j : jumps) {
    if (j > 0.0 && j < kHalfPi) edges.push_back(j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// |int_a^b (level - G) q| for a subcell on which level - G keeps its sign.
double signed_cell_integral(const CdfFn& G, double level, double a, double b, WeightKind q) {
  if (b <= a) return 0.0;
  if (q == WeightKind::Constant) {
    return std::abs(integrate_refined([&](double t) { return level - G(t); }, a, b));
  }
  // theta = pi/4 -+ w^2 turns q dtheta into 2 dw.
  if (b <= kQuarterPi) {
    const double w_lo = std::sqrt(kQuarterPi - b);
    const double w_hi = std::sqrt(kQuarterPi - a);
    return std::abs(integrate_refined([&](double w) { return 2.0 * (level - G(kQuarterPi - w * w)); }, w_lo, w_hi));
  }
  const double w_lo = std::sqrt(a - kQuarterPi);
  const double w_hi = std::sqrt(b - kQuarterPi);
  return std::abs(integrate_refined([&](double w) { return 2.0 * (level - G(kQuarterPi + w * w)); }, w_lo, w_hi));
}

}  // namespace

double weighted_l1_distance(const StepCDF& F, const CdfFn& G, WeightKind q, int* cells) {
  const std::vector<double> edges = cell_edges(F.jumps());
  double total = 0.0;
  int count = 0;
  double g_prev = G(edges.front());
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e];
    const double b = edges[e + 1];
    const double level = F(a);
    const double ga = g_prev;
    const double gb = G(b);
    if (gb < ga - 1e-12) throw NumericalError("model CDF is not monotone");
    g_prev = gb;
    if ((ga - level) * (gb - level) < 0.0) {
      std::uintmax_t iters = 100;
      auto tol = [](double lo, double hi) { return hi - lo < 1e-10; };
      const auto bracket = boost::math::tools::toms748_solve([&](double t) { return G(t) - level; }, a, b,
                                                             ga - level, gb - level, tol, iters);
      const double root = 0.5 * (bracket.first + bracket.second);
      total += signed_cell_integral(G, level, a, root, q);
      total += signed_cell_integral(G, level, root, b, q);
      count += 2;
    } else {
      total += signed_cell_integral(G, level, a, b, q);
      count += 1;
    }
  }
  if (cells) *cells = count;
  return total;
}

double weighted_l1_distance(const StepCDF& F, const StepCDF& G, WeightKind q) {
  std::vector<double> jumps = F.jumps();
  jumps.insert(jumps.end(), G.jumps().begin(), G.jumps().end());
  const std::vector<double> edges = cell_edges(jumps);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e];
    const double b = edges[e + 1];
    total += std::abs(F(a) - G(a)) * weight_integral(q, a, b);
  }
  return total;
}

TestStatistic test_statistic(const AngularDataset& d, const AngularModel& model, WeightKind q) {
  if (d.degenerate()) throw DegenerateDataError("test statistic needs at least 2 exceedances");
  TestStatistic t;
  t.k = d.k;
  t.q = q;
  const StepCDF F = empirical_angular_cdf(d, true);
  const double dist =
      weighted_l1_distance(F, [&](double theta) { return model.normalized_cdf(theta); }, q, &t.cells);
  t.value = std::sqrt(static_cast<double>(d.k)) * dist;
  return t;
}

}  // namespace angof

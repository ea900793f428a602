#include "angof/multiple_testing.hpp"

#include <algorithm>
#include <numeric>

#include "angof/error.hpp"

namespace angof {

namespace {

void check(const std::vector<double>& pvalues, double alpha) {
  if (pvalues.empty()) throw DomainError("multiple testing needs at least one p-value");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p-values must lie in [0, 1]");
  }
}

}  // namespace

std::vector<bool> bonferroni(const std::vector<double>& pvalues, double alpha) {
  check(pvalues, alpha);
  const double cut = alpha / static_cast<double>(pvalues.size());
  std::vector<bool> out(pvalues.size());
  for (std::size_t j = 0; j < pvalues.size(); ++j) out[j] = pvalues[j] <= cut;
  return out;
}

std::vector<bool> benjamini_hochberg(const std::vector<double>& pvalues, double alpha, bool dependent) {
  check(pvalues, alpha);
  const std::size_t m = pvalues.size();
  double level = alpha;
  if (dependent) {
    double harmonic = 0.0;
    for (std::size_t i = 1; i <= m; ++i) harmonic += 1.0 / static_cast<double>(i);
    level /= harmonic;
  }
  std::vector<double> sorted = pvalues;
  std::sort(sorted.begin(), sorted.end());
  double threshold = -1.0;
  for (std::size_t i = m; i >= 1; --i) {
    if (sorted[i - 1] <= static_cast<double>(i) * level / static_cast<double>(m)) {
      threshold = sorted[i - 1];
      break;
    }
  }
  std::vector<bool> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = pvalues[j] <= threshold;
  return out;
}

}  // namespace angof

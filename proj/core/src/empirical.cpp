#include "angof/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "angof/error.hpp"

namespace angof {

void validate_sample(const BivariateSample& s) {
  if (s.x1.size() != s.x2.size()) throw DomainError("sample columns differ in length");
  if (s.size() < 2) throw DomainError("sample needs at least 2 observations");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::isnan(s.x1[i]) || std::isnan(s.x2[i])) {
      std::ostringstream os;
      os << "NaN in sample at row " << i;
      throw DomainError(os.str());
    }
  }
}

std::vector<int> rank_column(const std::vector<double>& column, int* ties) {
  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
  std::vector<int> rank(n);
  int tie_count = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    rank[order[pos]] = static_cast<int>(pos) + 1;
    if (pos > 0 && column[order[pos]] == column[order[pos - 1]]) ++tie_count;
  }
  if (ties) *ties = tie_count;
  return rank;
}

Ranks compute_ranks(const BivariateSample& s) {
  validate_sample(s);
  Ranks out;
  out.r1 = rank_column(s.x1, &out.ties1);
  out.r2 = rank_column(s.x2, &out.ties2);
  return out;
}

int k_sqrt_rule(int n) {
  if (n < 1) throw DomainError("k rule needs n >= 1");
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) + 0.5));
}

AngularDataset select_exceedances(const Ranks& ranks, int k, PNorm p) {
  const int n = ranks.n();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "k must satisfy 1 <= k <= n, got k = " << k << ", n = " << n;
    throw DomainError(os.str());
  }
  AngularDataset d;
  d.n = n;
  d.k = k;
  d.p = p;
  d.ties = ranks.ties1 + ranks.ties2;
  for (int i = 0; i < n; ++i) {
    const double a = n + 1 - ranks.r1[i];
    const double b = n + 1 - ranks.r2[i];
    bool exceeds;
    if (p.is_infinite()) {
      exceeds = std::min(a, b) <= k;
    } else {
      exceeds = lp_norm(p, k / a, k / b) >= 1.0 - 1e-12;
    }
    if (exceeds) d.angles.push_back(std::atan2(b, a));
  }
  std::sort(d.angles.begin(), d.angles.end());
  if (!d.angles.empty()) d.weights.assign(d.angles.size(), 1.0 / static_cast<double>(d.angles.size()));
  return d;
}

EuclideanWeights euclidean_weights(const std::vector<double>& angles, PNorm p) {
  const std::size_t K = angles.size();
  if (K < 2) throw DegenerateDataError("Euclidean likelihood weights need at least 2 exceedances");
  std::vector<double> f(K);
  for (std::size_t j = 0; j < K; ++j) f[j] = constraint_f(p, angles[j]);
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / K;
  std::vector<double> d(K);
  for (std::size_t j = 0; j < K; ++j) d[j] = f[j] - mean;
  // Re-centre so that sum d = 0 holds to rounding.
  const double drift = std::accumulate(d.begin(), d.end(), 0.0) / K;
  double var = 0.0;
  for (auto& v : d) {
    v -= drift;
    var += v * v;
  }
  var /= K;
  if (!(var > 1e-28)) throw DegenerateDataError("all exceedance angles give the same constraint value");
  EuclideanWeights out;
  out.weights.resize(K);
  const double slope = mean / var;
  for (std::size_t j = 0; j < K; ++j) {
    out.weights[j] = (1.0 - slope * d[j]) / K;
    if (out.weights[j] < 0.0) out.any_negative = true;
  }
  return out;
}

AngularDataset angular_dataset(const BivariateSample& s, int k, PNorm p) {
  AngularDataset d = select_exceedances(compute_ranks(s), k, p);
  if (d.degenerate()) return d;
  EuclideanWeights w = euclidean_weights(d.angles, p);
  d.weights = std::move(w.weights);
  d.negative_weights = w.any_negative;
  return d;
}

StepCDF::StepCDF(std::vector<double> locations, std::vector<double> masses) {
  if (locations.size() != masses.size()) throw DomainError("step CDF: locations and masses differ in length");
  std::vector<std::size_t> order(locations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return locations[a] < locations[b]; });
  double running = 0.0;
  for (std::size_t idx : order) {
    const double loc = locations[idx];
    if (loc < 0.0 || loc > kHalfPi) throw DomainError("step CDF jump outside [0, pi/2]");
    running += masses[idx];
    if (!jumps_.empty() && jumps_.back() == loc) {
      cum_.back() = running;
    } else {
      jumps_.push_back(loc);
      cum_.push_back(running);
    }
  }
}

double StepCDF::operator()(double theta) const noexcept {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), theta);
  if (it == jumps_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

StepCDF empirical_angular_cdf(const AngularDataset& d, bool reweighted) {
  if (d.angles.empty()) throw DegenerateDataError("no exceedances");
  if (reweighted) return StepCDF(d.angles, d.weights);
  return StepCDF(d.angles, std::vector<double>(d.angles.size(), 1.0 / d.K()));
}

double empirical_stdf(const Ranks& ranks, int k, double x1, double x2) {
  const int n = ranks.n();
  if (k < 1 || k > n) throw DomainError("empirical stdf needs 1 <= k <= n");
  if (x1 < 0.0 || x2 < 0.0) throw DomainError("empirical stdf needs nonnegative arguments");
  const double t1 = n + 0.5 - k * x1;
  const double t2 = n + 0.5 - k * x2;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (ranks.r1[i] > t1 || ranks.r2[i] > t2) ++count;
  }
  return static_cast<double>(count) / k;
}

}  // namespace angof

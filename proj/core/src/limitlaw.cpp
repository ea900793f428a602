#include "angof/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "angof/error.hpp"
#include "angof/parallel.hpp"
#include "angof/quadrature.hpp"
#include "angof/rng.hpp"

namespace angof {

std::string to_string(CellRule rule) { return rule == CellRule::Midpoint ? "midpoint" : "corner"; }

CellRule parse_cell_rule(const std::string& text) {
  if (text == "midpoint") return CellRule::Midpoint;
  if (text == "corner") return CellRule::LowerCorner;
  throw ConfigError("unknown cell rule '" + text + "' (expected midpoint or corner)");
}

double FieldGrid::nominal(int i) const noexcept {
  if (is_tail(i)) return kInf;
  return rule == CellRule::Midpoint ? (i + 0.5) * h : i * h;
}

double FieldGrid::upper(int i) const noexcept { return is_tail(i) ? kInf : (i + 1) * h; }

int FieldGrid::count_le(double x) const noexcept {
  if (x == kInf) return cells();
  const double offset = rule == CellRule::Midpoint ? 0.5 : 0.0;
  const double raw = std::floor(x / h - offset + 1e-9) + 1.0;
  return static_cast<int>(std::clamp(raw, 0.0, static_cast<double>(M - 1)));
}

FieldGrid desk_grid() { return FieldGrid{}; }

FieldGrid paper_grid() {
  FieldGrid g;
  g.M = 1000;
  g.N = 1000;
  return g;
}

FieldGrid grid_preset(const std::string& name) {
  if (name == "desk") return desk_grid();
  if (name == "paper") return paper_grid();
  throw ConfigError("unknown grid preset '" + name + "' (expected desk or paper)");
}

void validate_grid(const FieldGrid& g) {
  std::ostringstream os;
  if (!(g.h > 0.0) || !std::isfinite(g.h)) os << "grid step h must be positive; ";
  if (g.M < 3) os << "grid size M must be at least 3; ";
  if (g.N < 100) os << "theta grid N must be at least 100; ";
  if (!os.str().empty()) throw ConfigError(os.str());
}

std::vector<double> cell_masses(const ModelParams& m, const FieldGrid& g) {
  validate_grid(g);
  const int n = g.cells();
  std::vector<double> edge(n + 1);
  for (int i = 0; i < n; ++i) edge[i] = g.lower(i);
  edge[n] = g.upper(n - 1);
  // Lambda([0, a] x [0, b]) on the edge lattice; Lebesgue margins at inf.
  std::vector<double> G(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      const double x = edge[a];
      const double y = edge[b];
      double v;
      if (x == 0.0 || y == 0.0) v = 0.0;
      else if (x == kInf && y == kInf) v = kInf;
      else if (x == kInf) v = y;
      else if (y == kInf) v = x;
      else v = x + y - stdf(m, x, y);
      G[static_cast<std::size_t>(a) * (n + 1) + b] = v;
    }
  }
  auto at = [&](int a, int b) { return G[static_cast<std::size_t>(a) * (n + 1) + b]; };
  std::vector<double> mass(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.is_tail(i) && g.is_tail(j)) {
        mass[static_cast<std::size_t>(i) * n + j] = 0.0;
        continue;
      }
      double v;
      if (g.is_tail(j)) {
        v = (edge[i + 1] - edge[i]) - (at(i + 1, j) - at(i, j));
      } else if (g.is_tail(i)) {
        v = (edge[j + 1] - edge[j]) - (at(i, j + 1) - at(i, j));
      } else {
        v = at(i + 1, j + 1) - at(i, j + 1) - at(i + 1, j) + at(i, j);
      }
      const double scale = std::max(1.0, std::min(edge[i + 1], edge[j + 1]) == kInf ? 1.0 : edge[i + 1] + edge[j + 1]);
      if (v < -1e-12 * scale) {
        std::ostringstream os;
        os << "negative cell mass " << v << " at cell (" << i << ", " << j << ")";
        throw NumericalError(os.str());
      }
      mass[static_cast<std::size_t>(i) * n + j] = std::max(0.0, v);
    }
  }
  return mass;
}

GaussianField::GaussianField(int cells, std::vector<double> values) : n_(cells), w_(std::move(values)) {
  if (w_.size() != static_cast<std::size_t>(n_) * n_) throw DomainError("field size does not match cell count");
  prefix_.assign(static_cast<std::size_t>(n_) * (n_ + 1), 0.0);
  col_.assign(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double run = 0.0;
    double* row = &prefix_[static_cast<std::size_t>(i) * (n_ + 1)];
    const double* src = &w_[static_cast<std::size_t>(i) * n_];
    for (int j = 0; j < n_; ++j) {
      run += src[j];
      row[j + 1] = run;
      col_[j] += src[j];
    }
  }
}

GaussianField simulate_field(const std::vector<double>& masses, const FieldGrid& g, std::uint64_t seed,
                             std::uint64_t draw) {
  const int n = g.cells();
  if (masses.size() != static_cast<std::size_t>(n) * n) throw DomainError("mass matrix does not match grid");
  constexpr std::uint32_t kTailIndex = 0xFFFFFFFFu;
  const Key key = key_from_seed(seed);
  const auto d_lo = static_cast<std::uint32_t>(draw);
  const auto d_hi = static_cast<std::uint32_t>(draw >> 32);
  std::vector<double> w(masses.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t ik = g.is_tail(i) ? kTailIndex : static_cast<std::uint32_t>(i);
    std::uint32_t cached_pair = kTailIndex;
    std::array<double, 2> pair{};
    for (int j = 0; j < n; ++j) {
      const double var = masses[static_cast<std::size_t>(i) * n + j];
      if (var <= 0.0) continue;
      const std::uint32_t jk = g.is_tail(j) ? kTailIndex : static_cast<std::uint32_t>(j);
      const std::uint32_t pk = jk >> 1;
      if (pk != cached_pair) {
        pair = normal_pair({pk, ik, d_lo, d_hi}, key);
        cached_pair = pk;
      }
      w[static_cast<std::size_t>(i) * n + j] = std::sqrt(var) * pair[jk & 1u];
    }
  }
  return GaussianField(n, std::move(w));
}

namespace {

// Number of leading y cells of column i inside C_{p,theta}.
int rows_in_C(const FieldGrid& g, PNorm p, int i, double theta) {
  const double x = g.nominal(i);
  if (theta <= 0.0) {
    if (x == kInf) return g.count_le(1.0);
    return g.rule == CellRule::LowerCorner ? 1 : 0;
  }
  double bound = y_p(p, x);
  if (theta < kHalfPi) bound = std::min(bound, x == kInf ? kInf : x * std::tan(theta));
  return g.count_le(bound);
}

}  // namespace

double eval_W_on_Cptheta(const GaussianField& w, const FieldGrid& g, PNorm p, double theta) {
  double sum = 0.0;
  for (int i = 0; i < w.cells(); ++i) sum += w.prefix(i, rows_in_C(g, p, i, theta));
  return sum;
}

Marginals eval_marginals(const GaussianField& w, const FieldGrid& g, double x, double y) {
  if (x < 0.0 || y < 0.0) throw DomainError("marginal processes need nonnegative arguments");
  Marginals m{0.0, 0.0};
  const int ix = g.count_le(x);
  const int jy = g.count_le(y);
  for (int i = 0; i < ix; ++i) m.w1 += w.row_sum(i);
  for (int j = 0; j < jy; ++j) m.w2 += w.col_sum(j);
  return m;
}

double eval_W_on_A(const GaussianField& w, const FieldGrid& g, double x, double y) {
  const Marginals m = eval_marginals(w, g, x, y);
  const int ix = g.count_le(x);
  const int jy = g.count_le(y);
  double both = 0.0;
  for (int i = 0; i < ix; ++i) both += w.prefix(i, jy);
  return m.w1 + m.w2 - both;
}

namespace {

double segment_integral(const RealFn& K, double a, double b) {
  if (!(b > a)) return 0.0;
  if (b == kInf) {
    // x = a e^u turns algebraic decay into exponential decay.
    return integrate_gk([&](double u) {
      const double x = a * std::exp(u);
      return x == kInf ? 0.0 : K(x) * x;
    }, 0.0, kInf, 1e-13, 1e-9, 12);
  }
  return integrate_gk(K, a, b, 1e-13, 1e-9, 12);
}

// For each cut c: int_{max(lo, c)}^{hi} K, or 0 when c >= hi.
std::vector<double> upper_integrals(const RealFn& K, double lo, double hi, const std::vector<double>& cuts) {
  std::vector<double> pts{lo};
  for (double c : cuts) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> tail(pts.size());
  double run = 0.0;
  for (std::size_t l = pts.size(); l-- > 0;) {
    const double next = l + 1 < pts.size() ? pts[l + 1] : hi;
    run += segment_integral(K, pts[l], next);
    tail[l] = run;
  }
  std::vector<double> out(cuts.size(), 0.0);
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    if (cuts[c] >= hi) continue;
    const double a = std::max(lo, cuts[c]);
    const auto it = std::lower_bound(pts.begin(), pts.end(), a);
    out[c] = tail[static_cast<std::size_t>(it - pts.begin())];
  }
  return out;
}

// For each cut c: int_{lo}^{min(c, hi)} K, or 0 when c <= lo.
std::vector<double> lower_integrals(const RealFn& K, double lo, double hi, const std::vector<double>& cuts) {
  std::vector<double> pts{lo};
  for (double c : cuts) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> head(pts.size(), 0.0);
  for (std::size_t l = 1; l < pts.size(); ++l) head[l] = head[l - 1] + segment_integral(K, pts[l - 1], pts[l]);
  std::vector<double> out(cuts.size(), 0.0);
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    if (cuts[c] <= lo) continue;
    const double b = std::min(hi, cuts[c]);
    const auto it = std::lower_bound(pts.begin(), pts.end(), b);
    out[c] = head[static_cast<std::size_t>(it - pts.begin())];
  }
  return out;
}

}  // namespace

LimitLawPlan::LimitLawPlan(const ModelParams& m, PNorm p, const FieldGrid& g, WeightKind q, unsigned threads)
    : params_(m), p_(p), grid_(g), q_(q) {
  if (p.is_infinite()) throw UnsupportedError("the limit-law simulator supports finite p only");
  validate_grid(g);
  n_ = g.cells();
  masses_ = cell_masses(m, g);

  const AngularModel model(m, p);
  total_mass_ = model.total_mass();
  const int N = g.N;
  const double delta = kHalfPi / N;
  thetas_.resize(N);
  for (int k = 0; k < N; ++k) thetas_[k] = (k + 0.5) * delta;

  Q_.resize(N);
  fprime_.resize(N);
  cell_q_.resize(N);
  for (int k = 0; k < N; ++k) {
    Q_[k] = model.normalized_cdf(thetas_[k]);
    fprime_[k] = constraint_f_prime(p, thetas_[k]);
    cell_q_[k] = weight_integral(q, k * delta, (k + 1) * delta);
  }

  // int_0^theta f dQ = f(theta) Q(theta) - int_0^theta f' Q, by parts. Q is
  // a piecewise cubic between cache nodes, so Gauss-Legendre on every piece
  // is accurate where adaptive rules stall on the joins.
  std::vector<double> pts = model.cache_nodes();
  pts.insert(pts.end(), thetas_.begin(), thetas_.end());
  pts.push_back(kQuarterPi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto fpQ = [&](double t) { return constraint_f_prime(p, t) * model.normalized_cdf(t); };
  auto ffpQ = [&](double t) { return 2.0 * constraint_f(p, t) * fpQ(t); };
  std::vector<double> cum_fpQ(pts.size(), 0.0);
  double int_ffpQ = 0.0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    cum_fpQ[j] = cum_fpQ[j - 1] + composite_gauss_legendre(fpQ, pts[j - 1], pts[j], 1);
    int_ffpQ += composite_gauss_legendre(ffpQ, pts[j - 1], pts[j], 1);
  }
  const double int_fpQ = cum_fpQ.back();
  f_dQ_.resize(N);
  for (int k = 0; k < N; ++k) {
    const auto it = std::lower_bound(pts.begin(), pts.end(), thetas_[k]);
    f_dQ_[k] = constraint_f(p, thetas_[k]) * Q_[k] - cum_fpQ[static_cast<std::size_t>(it - pts.begin())];
  }
  const double mu = 1.0 - int_fpQ;
  sigma2_ = (1.0 - int_ffpQ) - mu * mu;
  if (!(sigma2_ > 0.0)) throw NumericalError("model variance of the constraint function is not positive");

  grad_ = grad_normalized_cdf_grid(m, p, thetas_, &grad_clamped_);
  const ExpansionConstants ec = expansion_constants(m);
  g_ = ec.g;
  sigma_x_ = ec.sigma_x;
  sigma_y_ = ec.sigma_y;
  const auto ld = stdf_partials(m, sigma_x_, sigma_y_);
  ldot1_ = ld[0];
  ldot2_ = ld[1];

  rows_in_C_.assign(static_cast<std::size_t>(N + 1) * n_, 0);
  c1_.assign(static_cast<std::size_t>(N + 1) * n_, 0.0);
  c2_.assign(static_cast<std::size_t>(N + 1) * n_, 0.0);
  parallel_for(static_cast<std::size_t>(N + 1), threads, [&](std::size_t k) { build_theta_row(static_cast<int>(k)); });
}

void LimitLawPlan::build_theta_row(int k) {
  const int N = grid_.N;
  const double theta = k < N ? thetas_[k] : kHalfPi;
  const bool top = k == N;
  const std::size_t base = static_cast<std::size_t>(k) * n_;
  for (int i = 0; i < n_; ++i) rows_in_C_[base + i] = rows_in_C(grid_, p_, i, theta);

  double* c1 = &c1_[base];
  double* c2 = &c2_[base];
  const double floor_coord = 0.5 * grid_.h;
  std::vector<double> coord(n_);
  for (int i = 0; i < n_; ++i) {
    const double v = grid_.nominal(i);
    coord[i] = v == kInf ? kInf : std::max(v, floor_coord);
  }

  const ModelParams& m = params_;
  const PNorm p = p_;
  const double xp = top ? 1.0 : x_p_of_theta(p, theta);
  const double t = top ? kInf : std::tan(theta);
  const double Y = top ? kInf : xp * t;

  // Ray part: lambda(x, x t) = lambda(1, t) / x, integrated in closed form.
  if (!top) {
    const double lam = exponent_density(m, 1.0, t);
    for (int i = 0; i < n_; ++i) {
      if (coord[i] < xp) c1[i] += t * lam * std::log(xp / coord[i]);
      if (coord[i] < Y) c2[i] -= lam * std::log(Y / coord[i]);
    }
  }

  // Curve part, split at the symmetric point s where y_p(s) = s.
  const double s = std::pow(2.0, 1.0 / p.value());
  const double mA = std::max(xp, s);
  auto lam_on_curve = [&](double x) { return x == kInf ? 0.0 : exponent_density(m, x, y_p(p, x)); };
  auto lam_on_curve_swapped = [&](double y) { return y == kInf ? 0.0 : exponent_density(m, y_p(p, y), y); };
  auto slope = [&](double x) { return x == kInf ? 0.0 : y_p_prime_abs(p, x); };

  // (A) x in [mA, inf): kernels lambda |y_p'| for W1(x), lambda for W2(y_p(x)).
  {
    const RealFn k1 = [&](double x) { return lam_on_curve(x) * slope(x); };
    const RealFn k2 = [&](double x) { return lam_on_curve(x); };
    const std::vector<double> a1 = upper_integrals(k1, mA, kInf, coord);
    std::vector<double> cut2(n_);
    for (int j = 0; j < n_; ++j) cut2[j] = coord[j] <= 1.0 ? kInf : y_p(p, coord[j]);
    const std::vector<double> a2 = lower_integrals(k2, mA, kInf, cut2);
    for (int i = 0; i < n_; ++i) {
      if (coord[i] != kInf) c1[i] -= a1[i];
      c2[i] -= a2[i];
    }
  }
  // (B) y in [s, Y) when x_p < s: the part near x = 1, integrated in y.
  if (xp < s) {
    const RealFn k1 = [&](double y) { return lam_on_curve_swapped(y) * slope(y); };
    const RealFn k2 = [&](double y) { return lam_on_curve_swapped(y); };
    const std::vector<double> b2 = upper_integrals(k1, s, Y, coord);
    std::vector<double> cut1(n_);
    for (int i = 0; i < n_; ++i) cut1[i] = coord[i] <= 1.0 ? kInf : y_p(p, coord[i]);
    const std::vector<double> b1 = lower_integrals(k2, s, Y, cut1);
    for (int i = 0; i < n_; ++i) {
      if (coord[i] != kInf) c2[i] -= b2[i];
      c1[i] -= b1[i];
    }
  }
}

double LimitLawPlan::eval_Zp(const GaussianField& w, int k) const {
  const std::size_t base = static_cast<std::size_t>(k) * n_;
  double z = 0.0;
  for (int i = 0; i < n_; ++i) z += c1_[base + i] * w.row_sum(i) + c2_[base + i] * w.col_sum(i);
  return z;
}

LimitLawPlan::Processes LimitLawPlan::evaluate(const GaussianField& w) const {
  if (w.cells() != n_) throw DomainError("field does not match the plan's grid");
  const int N = grid_.N;
  Processes out;
  out.alpha.resize(N + 1);
  std::vector<double> R(n_), C(n_);
  for (int i = 0; i < n_; ++i) {
    R[i] = w.row_sum(i);
    C[i] = w.col_sum(i);
  }
  for (int k = 0; k <= N; ++k) {
    const std::size_t base = static_cast<std::size_t>(k) * n_;
    const int* rows = &rows_in_C_[base];
    const double* a1 = &c1_[base];
    const double* a2 = &c2_[base];
    double v = 0.0;
    for (int i = 0; i < n_; ++i) v += w.prefix(i, rows[i]) + a1[i] * R[i] + a2[i] * C[i];
    out.alpha[k] = v;
  }
  const double alpha_top = out.alpha[N];
  const double delta = kHalfPi / N;
  out.beta.resize(N);
  double proj = 0.0;
  for (int k = 0; k < N; ++k) {
    out.beta[k] = (out.alpha[k] - Q_[k] * alpha_top) / total_mass_;
    proj += out.beta[k] * fprime_[k] * delta;
  }
  const double coef = proj / sigma2_;
  out.gamma.resize(N);
  for (int k = 0; k < N; ++k) out.gamma[k] = out.beta[k] + coef * f_dQ_[k];

  const Marginals marg = eval_marginals(w, grid_, sigma_x_, sigma_y_);
  const double wa = eval_W_on_A(w, grid_, sigma_x_, sigma_y_);
  out.I = g_ * (wa - ldot1_ * marg.w1 - ldot2_ * marg.w2);

  out.X.resize(N);
  double L = 0.0;
  for (int k = 0; k < N; ++k) {
    out.X[k] = out.gamma[k] - grad_[k] * out.I;
    L += std::abs(out.X[k]) * cell_q_[k];
  }
  out.L = L;
  return out;
}

LimitLawDraws simulate_L(const LimitLawPlan& plan, int B, std::uint64_t seed, unsigned threads) {
  if (B < 1) throw DomainError("number of draws B must be at least 1");
  LimitLawDraws out;
  out.values.assign(B, 0.0);
  out.params = plan.params();
  out.p = plan.p();
  out.grid = plan.grid();
  out.q = plan.weight();
  out.seed = seed;
  parallel_for(static_cast<std::size_t>(B), threads,
               [&](std::size_t b) { out.values[b] = plan.draw(plan.field(seed, b)); });
  return out;
}

double quantile(const std::vector<double>& draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  if (draws.empty()) throw DomainError("quantile of an empty draw set");
  std::vector<double> sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  const double B = static_cast<double>(sorted.size());
  const auto idx = static_cast<std::size_t>(std::clamp(std::ceil(level * B - 1e-9), 1.0, B));
  return sorted[idx - 1];
}

double quantile(const LimitLawDraws& draws, double level) { return quantile(draws.values, level); }

double p_value(const std::vector<double>& draws, double t) {
  if (draws.empty()) throw DomainError("p-value from an empty draw set");
  const auto count = std::count_if(draws.begin(), draws.end(), [&](double v) { return v >= t; });
  return static_cast<double>(count) / static_cast<double>(draws.size());
}

double p_value(const LimitLawDraws& draws, double t) { return p_value(draws.values, t); }

}  // namespace angof

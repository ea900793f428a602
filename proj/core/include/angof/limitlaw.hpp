#pragma once

// Monte-Carlo simulation of the asymptotic null law L_r of T_n: a Wiener
// field with intensity Lambda_r discretised on a grid of cells, pushed
// through the linear maps alpha -> beta -> gamma -> X, then integrated
// against the weight q.

#include <cstdint>
#include <string>
#include <vector>

#include "angof/geometry.hpp"
#include "angof/models.hpp"

namespace angof {

/// Which point of a cell decides membership of the cell in a set.
enum class CellRule {
  Midpoint,     // (i + 1/2) h
  LowerCorner,  // i h, the index rule [x/h + 1]
};

std::string to_string(CellRule rule);
CellRule parse_cell_rule(const std::string& text);

struct FieldGrid {
  double h = 0.05;
  int M = 200;          // grid points per axis; M - 1 finite cells
  int N = 500;          // theta midpoints
  bool tails = true;    // extra row/column absorbing [(M - 1) h, inf)
  CellRule rule = CellRule::Midpoint;

  /// Cells per axis, including the tail cell.
  int cells() const noexcept { return M - 1 + (tails ? 1 : 0); }
  bool is_tail(int i) const noexcept { return tails && i == M - 1; }
  /// Membership coordinate of cell i (+inf for the tail cell).
  double nominal(int i) const noexcept;
  double lower(int i) const noexcept { return i * h; }
  double upper(int i) const noexcept;
  /// Number of leading cells with nominal coordinate <= x.
  int count_le(double x) const noexcept;
};

FieldGrid desk_grid();   // h = 0.05, M = 200, N = 500
FieldGrid paper_grid();  // h = 0.05, M = 1000, N = 1000
FieldGrid grid_preset(const std::string& name);
void validate_grid(const FieldGrid& g);

/// Lambda_r(C_ij) for all cells, row-major in (i = x index, j = y index).
/// The tail-tail corner has infinite mass and is never used; it is set to 0.
std::vector<double> cell_masses(const ModelParams& m, const FieldGrid& g);

class GaussianField {
 public:
  GaussianField(int cells, std::vector<double> values);

  int cells() const noexcept { return n_; }
  double at(int i, int j) const noexcept { return w_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& values() const noexcept { return w_; }

  /// prefix(i, J) = sum_{j < J} W_ij.
  double prefix(int i, int J) const noexcept { return prefix_[static_cast<std::size_t>(i) * (n_ + 1) + J]; }
  /// W_{i.}: sum over y cells of column i.
  double row_sum(int i) const noexcept { return prefix(i, n_); }
  /// W_{.j}: sum over x cells of row j.
  double col_sum(int j) const noexcept { return col_[j]; }

 private:
  int n_;
  std::vector<double> w_;
  std::vector<double> prefix_;
  std::vector<double> col_;
};

/// W_ij ~ N(0, mass_ij), independent. The normal of cell (i, j) in draw
/// `draw` depends only on (seed, draw, i, j), with tail cells on reserved
/// indices, so grids that share cells share their values.
GaussianField simulate_field(const std::vector<double>& masses, const FieldGrid& g, std::uint64_t seed,
                             std::uint64_t draw);

/// Discretised W(C_{p,theta}): cells whose nominal point lies in C_{p,theta}.
double eval_W_on_Cptheta(const GaussianField& w, const FieldGrid& g, PNorm p, double theta);

struct Marginals {
  double w1;
  double w2;
};
Marginals eval_marginals(const GaussianField& w, const FieldGrid& g, double x, double y);

/// Discretised W(A_{(x, y)}) with A_{(x,y)} = {u <= x or v <= y}.
double eval_W_on_A(const GaussianField& w, const FieldGrid& g, double x, double y);

/// Every draw-independent quantity needed to turn a field into one draw of
/// L_r. Building it is the expensive step; draws are then O(N * cells).
class LimitLawPlan {
 public:
  LimitLawPlan(const ModelParams& m, PNorm p, const FieldGrid& g, WeightKind q, unsigned threads = 0);

  const ModelParams& params() const noexcept { return params_; }
  PNorm p() const noexcept { return p_; }
  const FieldGrid& grid() const noexcept { return grid_; }
  WeightKind weight() const noexcept { return q_; }
  const std::vector<double>& thetas() const noexcept { return thetas_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  bool gradient_clamped() const noexcept { return grad_clamped_; }

  /// Z_p(theta_k) for the k-th grid angle (k = N gives pi/2).
  double eval_Zp(const GaussianField& w, int k) const;

  struct Processes {
    std::vector<double> alpha;  // N + 1 entries, last one at pi/2
    std::vector<double> beta;   // N entries
    std::vector<double> gamma;
    std::vector<double> X;
    double I = 0.0;
    double L = 0.0;
  };
  Processes evaluate(const GaussianField& w) const;
  double draw(const GaussianField& w) const { return evaluate(w).L; }

  GaussianField field(std::uint64_t seed, std::uint64_t draw) const {
    return simulate_field(masses_, grid_, seed, draw);
  }

 private:
  void build_theta_row(int k);

  ModelParams params_;
  PNorm p_;
  FieldGrid grid_;
  WeightKind q_;
  int n_ = 0;
  std::vector<double> masses_;
  std::vector<double> thetas_;    // N midpoints
  std::vector<int> rows_in_C_;    // (N + 1) x n_
  std::vector<double> c1_;        // (N + 1) x n_, coefficients of W_{i.}
  std::vector<double> c2_;        // (N + 1) x n_, coefficients of W_{.j}
  std::vector<double> Q_;         // N
  std::vector<double> fprime_;    // N
  std::vector<double> f_dQ_;      // N, int_0^theta f dQ
  std::vector<double> grad_;      // N
  std::vector<double> cell_q_;    // N, int of q over each theta cell
  double total_mass_ = 0.0;
  double sigma2_ = 0.0;
  double g_ = 0.0;
  double ldot1_ = 0.0;
  double ldot2_ = 0.0;
  double sigma_x_ = 1.0;
  double sigma_y_ = 1.0;
  bool grad_clamped_ = false;
};

struct LimitLawDraws {
  std::vector<double> values;  // indexed by replicate
  ModelParams params;
  PNorm p = PNorm::finite(2.0);
  FieldGrid grid;
  WeightKind q = WeightKind::Constant;
  std::uint64_t seed = 0;
};

/// B draws; replicate b uses draw index b. Results do not depend on the
/// number of threads.
LimitLawDraws simulate_L(const LimitLawPlan& plan, int B, std::uint64_t seed, unsigned threads = 0);

/// ceil(level * B)-th order statistic of the draws.
double quantile(const std::vector<double>& draws, double level);
double quantile(const LimitLawDraws& draws, double level);

/// #{b : L_b >= t} / B.
double p_value(const std::vector<double>& draws, double t);
double p_value(const LimitLawDraws& draws, double t);

}  // namespace angof

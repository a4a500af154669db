#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/cocycle.hpp"
#include "ergolab/linalg.hpp"
#include "ergolab/step_rules.hpp"

namespace ergolab {

// Symbol -> invertible d x d matrix A(T^k omega).  The product is
// A^(n) = A(T^{n-1} omega) ... A(omega).
struct MatrixCocycle {
  Eigen::Index dim = 0;
  std::function<Eigen::MatrixXd(const Symbol&)> step;
  std::string name;

  // Evaluates the step and rejects matrices with |det| <= 1e-12 ||A||^d.
  Eigen::MatrixXd operator()(const Symbol& s) const;
};

MatrixCocycle constant_cocycle(Eigen::MatrixXd a);
// Label l selects table[l].
MatrixCocycle table_cocycle(std::vector<Eigen::MatrixXd> table);
// Symbol (turn): R(2 pi turn) diag(values), two-dimensional.
MatrixCocycle rotated_diagonal_cocycle(Eigen::Vector2d values);
// A -> A^{-1}; with the reversed path this is the inverse cocycle.
MatrixCocycle inverse_cocycle(MatrixCocycle c);

// The isometry of the cone attached to A is g = A^T, so that the orbit point
// Z_n Z_n^T = A^(n)T A^(n) and |Z_n| = 2 ||ln singular values of A^(n)||.
template <class S = double>
auto posdef_rule(const MatrixCocycle& c) {
  return [c](const Symbol& s) { return cast_matrix<S, double>(Eigen::MatrixXd(c(s).transpose())); };
}

struct SpectrumCheckpoint {
  std::size_t n = 0;
  Eigen::VectorXd mu;       // running exponents, descending
  double det_residual = 0;  // |(1/n) sum ln|det A_k| - sum mu|
};

struct LyapunovSpectrum {
  Eigen::VectorXd mu;                 // mu_1 >= ... >= mu_d
  std::vector<double> lambda;         // grouped exponents, decreasing
  std::vector<int> multiplicity;      // m_i
  std::vector<Eigen::MatrixXd> flag;  // flag[i]: orthonormal basis of V_{i+1}, dim = sum_{j>i} m_j
  Eigen::MatrixXd adapted_basis;      // column j spans the mu_j direction (rows of K_n)
  double gap_threshold = 0.0;         // 10 / sqrt(n)
  std::size_t depth = 0;
  double det_average = 0.0;           // (1/n) sum ln|det A_k|
  double moment = 0.0;                // (1/n) sum max(ln||A||, ln||A^{-1}||)
  std::vector<SpectrumCheckpoint> history;
  std::vector<std::string> warnings;
};

// Benettin QR iteration with log accumulation, re-orthonormalized every
// reorth_stride steps; the flag comes from a QR sweep over the transposed
// steps in reverse order.
LyapunovSpectrum lyapunov_spectrum(const MatrixCocycle& coc, const SymbolPath& path,
                                   std::size_t reorth_stride = 1,
                                   double moment_bound = INFINITY,
                                   std::size_t history_points = 48);

// Orthonormal basis of the span of the right singular vectors of A^(n)
// (fastest first), computed without forming the product.
Eigen::MatrixXd right_singular_basis(const MatrixCocycle& coc, const SymbolPath& path,
                                     std::size_t n);

// (1/n) ln of the singular values of the product A^(n), multiplied out
// explicitly in BigReal.  Descending.
Eigen::VectorXd product_exponents(const MatrixCocycle& coc, const SymbolPath& path);

// Largest principal angle between two subspaces given by orthonormal bases.
double principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct OmetReport {
  struct Failure {
    std::size_t n = 0, i = 0, j = 0;
    double excess = 0.0;  // ln|component| - n (mu_j + eps)
  };
  double eps = 0.0;
  std::vector<std::size_t> depths;
  std::vector<double> worst_excess;    // per depth, max over (i, j)
  std::optional<Failure> first_failure;
  std::optional<std::size_t> n0;      // bounds hold at every checked depth >= n0
  double det_residual = 0.0;          // |(1/N) ln|det A^(N)| - sum mu|
  double flag_angle = 0.0;            // angle between the exact-product flag and the QR flag
  unsigned precision_bits = 0;
  bool entries_pass = false;          // n0 exists and n0 <= N/2
  bool det_pass = false;
  bool pass = false;
};

// Forms A^(n) exactly in BigReal (precision chosen from sum ln cond A_k), takes
// the adapted basis from the Cartan decomposition at the final depth, and
// checks ln|(A^(n) e_j)_i| <= n (mu_j + eps) at geometric checkpoints.
OmetReport verify_omet(const MatrixCocycle& coc, const LyapunovSpectrum& spectrum,
                       const SymbolPath& path, double eps, std::size_t checkpoints = 32);

// H_hat = log(Z_n x0) / (2n) for a cone trajectory.
template <class S>
Eigen::MatrixXd ray_matrix(const Trajectory<PosdefCone<S>>& tr, double drift_threshold = 0.01) {
  const double n = static_cast<double>(tr.size());
  require(tr.size() >= 1, "ray_matrix: empty trajectory");
  require(tr.distance(tr.size()) / n > drift_threshold, "ray_matrix: sublinear regime");
  const Mat<S> l = sym_log(tr.model.orbit_point(tr.terminal));
  return to_double_matrix(l) / (2.0 * n);
}

}  // namespace ergolab

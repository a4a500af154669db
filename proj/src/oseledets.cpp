#include "ergolab/oseledets.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ergolab/stats.hpp"

namespace ergolab {

Eigen::MatrixXd MatrixCocycle::operator()(const Symbol& s) const {
  Eigen::MatrixXd a = step(s);
  if (a.rows() != dim || a.cols() != dim)
    throw Error("matrix cocycle '" + name + "': wrong step dimension");
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0 && std::abs(a.determinant()) > 1e-12 * std::pow(scale, static_cast<double>(dim))))
    throw Error("matrix cocycle '" + name + "': step matrix is not invertible");
  return a;
}

MatrixCocycle constant_cocycle(Eigen::MatrixXd a) {
  const auto d = a.rows();
  require(a.cols() == d, "constant cocycle: matrix not square");
  return {d, [a](const Symbol&) { return a; }, "constant"};
}

MatrixCocycle table_cocycle(std::vector<Eigen::MatrixXd> table) {
  require(!table.empty(), "table cocycle: empty table");
  const auto d = table.front().rows();
  for (const auto& m : table)
    require(m.rows() == d && m.cols() == d, "table cocycle: matrices must share a square shape");
  return {d,
          [t = std::move(table)](const Symbol& s) {
            const auto l = static_cast<std::size_t>(s(0));
            require(s(0) >= 0 && l < t.size(), "table cocycle: label outside the table");
            return t[l];
          },
          "table"};
}

MatrixCocycle rotated_diagonal_cocycle(Eigen::Vector2d values) {
  return {2,
          [values](const Symbol& s) {
            const double th = 2.0 * std::numbers::pi * s(0);
            Eigen::Matrix2d r;
            r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
            return Eigen::MatrixXd(r * values.asDiagonal());
          },
          "rotated_diagonal"};
}

MatrixCocycle inverse_cocycle(MatrixCocycle c) {
  const auto d = c.dim;
  std::string name = "inverse(" + c.name + ")";
  return {d, [c = std::move(c)](const Symbol& s) { return Eigen::MatrixXd(c(s).inverse()); },
          std::move(name)};
}

namespace {

// Q R = m with diag(R) >= 0; returns ln diag(R) and replaces m by Q.
Eigen::VectorXd qr_step(Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const auto d = m.rows();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd l(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double r = qr.matrixQR()(i, i);
    require(r != 0.0 && std::isfinite(r), "lyapunov_spectrum: overflow or rank loss in the QR step");
    if (r < 0) q.col(i) = -q.col(i);
    l(i) = std::log(std::abs(r));
  }
  m = std::move(q);
  return l;
}

}  // namespace

Eigen::MatrixXd right_singular_basis(const MatrixCocycle& coc, const SymbolPath& path,
                                     std::size_t n) {
  require(n >= 1 && n <= path.size(), "right_singular_basis: depth outside the path");
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(coc.dim, coc.dim);
  for (std::size_t k = n; k-- > 0;) {
    Eigen::MatrixXd m = coc(path[k]).transpose() * q;
    qr_step(m);
    q = std::move(m);
  }
  return q;
}

Eigen::VectorXd product_exponents(const MatrixCocycle& coc, const SymbolPath& path) {
  const std::size_t n = path.size();
  require(n >= 1, "product_exponents: empty path");
  std::vector<Eigen::MatrixXd> steps;
  steps.reserve(n);
  double log_range = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    steps.push_back(coc(path[k]));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(steps.back());
    const auto& s = svd.singularValues();
    log_range += std::log(s(0) / s(coc.dim - 1));
  }
  PrecisionScope scope(bits_for_log_range(log_range));
  Mat<BigReal> p = Mat<BigReal>::Identity(coc.dim, coc.dim);
  for (const auto& a : steps) p = cast_matrix<BigReal, double>(a) * p;
  const auto ct = cartan(p);
  Eigen::VectorXd mu(coc.dim);
  for (Eigen::Index i = 0; i < coc.dim; ++i)
    mu(i) = to_double(BigReal(log(ct.delta(i)))) / static_cast<double>(n);
  return mu;
}

double principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "principal_angle: subspace dimensions differ");
  if (a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b);
  const double c = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(c);
}

LyapunovSpectrum lyapunov_spectrum(const MatrixCocycle& coc, const SymbolPath& path,
                                   std::size_t reorth_stride, double moment_bound,
                                   std::size_t history_points) {
  const auto d = coc.dim;
  const std::size_t n = path.size();
  require(n >= static_cast<std::size_t>(d), "lyapunov_spectrum: path shorter than the dimension");
  require(reorth_stride >= 1, "lyapunov_spectrum: reorth_stride must be at least 1");
  LyapunovSpectrum sp;
  sp.depth = n;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd logs = Eigen::VectorXd::Zero(d);
  double det_sum = 0.0, moment_sum = 0.0;
  const auto marks = stats::geometric_checkpoints(n, history_points, static_cast<std::size_t>(d));
  std::size_t next_mark = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const Eigen::MatrixXd a = coc(path[k - 1]);
    det_sum += std::log(std::abs(a.determinant()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    moment_sum += std::max(std::log(s(0)), -std::log(s(d - 1)));
    q = a * q;
    const bool mark = next_mark < marks.size() && marks[next_mark] == k;
    if (k % reorth_stride == 0 || k == n || mark) logs += qr_step(q);
    if (mark) {
      SpectrumCheckpoint cp;
      cp.n = k;
      cp.mu = logs / static_cast<double>(k);
      std::sort(cp.mu.data(), cp.mu.data() + d, std::greater<>());
      cp.det_residual = std::abs(det_sum / static_cast<double>(k) - cp.mu.sum());
      sp.history.push_back(std::move(cp));
      ++next_mark;
    }
  }
  const double nn = static_cast<double>(n);
  sp.mu = logs / nn;
  std::sort(sp.mu.data(), sp.mu.data() + d, std::greater<>());
  sp.det_average = det_sum / nn;
  sp.moment = moment_sum / nn;
  if (sp.moment > moment_bound)
    sp.warnings.push_back("moment guard: average max(ln||A||, ln||A^-1||) = " +
                          std::to_string(sp.moment) + " exceeds " + std::to_string(moment_bound));

  sp.gap_threshold = 10.0 / std::sqrt(nn);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (j > 0 && sp.mu(j - 1) - sp.mu(j) < sp.gap_threshold) {
      const double m = sp.multiplicity.back();
      sp.lambda.back() = (sp.lambda.back() * m + sp.mu(j)) / (m + 1);
      ++sp.multiplicity.back();
    } else {
      sp.lambda.push_back(sp.mu(j));
      sp.multiplicity.push_back(1);
    }
  }
  sp.adapted_basis = right_singular_basis(coc, path, n);
  Eigen::Index fast = 0;
  for (int m : sp.multiplicity) {
    sp.flag.push_back(sp.adapted_basis.rightCols(d - fast));
    fast += m;
  }
  return sp;
}

OmetReport verify_omet(const MatrixCocycle& coc, const LyapunovSpectrum& spectrum,
                       const SymbolPath& path, double eps, std::size_t checkpoints) {
  const auto d = coc.dim;
  const std::size_t n = path.size();
  require(spectrum.depth == n && spectrum.mu.size() == d,
          "verify_omet: spectrum was not computed on this path");
  require(eps >= 0.0, "verify_omet: eps must be nonnegative");
  std::vector<Eigen::MatrixXd> steps;
  steps.reserve(n);
  double log_range = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    steps.push_back(coc(path[k]));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(steps.back());
    const auto& s = svd.singularValues();
    log_range += std::log(s(0) / s(d - 1));
  }
  OmetReport r;
  r.eps = eps;
  r.precision_bits = bits_for_log_range(log_range);
  PrecisionScope scope(r.precision_bits);

  r.depths = stats::geometric_checkpoints(n, checkpoints);
  std::vector<Mat<BigReal>> products;
  Mat<BigReal> p = Mat<BigReal>::Identity(d, d);
  std::size_t next = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    p = cast_matrix<BigReal, double>(steps[k - 1]) * p;
    if (next < r.depths.size() && r.depths[next] == k) {
      products.push_back(p);
      ++next;
    }
  }
  const auto ct = cartan(p);
  const Mat<BigReal> basis = ct.K.transpose();  // column j: direction of mu_j

  const double slack_per_step = 1e-9;
  for (std::size_t c = 0; c < r.depths.size(); ++c) {
    const std::size_t m = r.depths[c];
    const double mm = static_cast<double>(m);
    const Mat<BigReal> v = products[c] * basis;
    double worst = -INFINITY;
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        const BigReal x = abs(v(i, j));
        if (x == 0) continue;
        const double excess = to_double(BigReal(log(x))) - mm * (spectrum.mu(j) + eps);
        worst = std::max(worst, excess);
        if (excess > slack_per_step * std::max(1.0, mm) && !r.first_failure)
          r.first_failure = OmetReport::Failure{m, static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(j), excess};
      }
    }
    r.worst_excess.push_back(worst);
  }
  for (std::size_t c = r.depths.size(); c-- > 0;) {
    if (r.worst_excess[c] > slack_per_step * std::max(1.0, static_cast<double>(r.depths[c]))) break;
    r.n0 = r.depths[c];
  }
  const BigReal det = p.determinant();
  const double ldet = to_double(BigReal(log(abs(det)))) / static_cast<double>(n);
  r.det_residual = std::abs(ldet - spectrum.mu.sum());

  const Eigen::MatrixXd exact_basis = to_double_matrix(basis);
  Eigen::Index fast = 0;
  for (std::size_t i = 0; i < spectrum.multiplicity.size(); ++i) {
    if (fast > 0) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(exact_basis.rightCols(d - fast));
      Eigen::MatrixXd ortho = qr.householderQ() * Eigen::MatrixXd::Identity(d, d - fast);
      r.flag_angle = std::max(r.flag_angle, principal_angle(ortho, spectrum.flag[i]));
    }
    fast += spectrum.multiplicity[i];
  }

  r.entries_pass = r.n0.has_value() && *r.n0 <= n / 2;
  r.det_pass = r.det_residual <= eps + 1e-12;
  r.pass = r.entries_pass && r.det_pass;
  return r;
}

}  // namespace ergolab

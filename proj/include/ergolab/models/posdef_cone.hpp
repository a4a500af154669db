#pragma once

#include <cmath>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/linalg.hpp"

namespace ergolab {

// Symmetric positive-definite d x d matrices with the invariant metric
// d(P, Q) = || log(P^{-1/2} Q P^{-1/2}) ||_F.  GL(d) acts by g.P = g P g^T.
template <class S = double>
class PosdefCone {
 public:
  using Real = S;
  using Point = Mat<S>;
  using Isometry = Mat<S>;
  struct Boundary {
    Mat<S> H;  // symmetric, unit Frobenius norm; ray t -> exp(t H)
  };

  explicit PosdefCone(Eigen::Index dim) : dim_(dim) { require(dim >= 1, "posdef_cone: dimension must be positive"); }

  static std::string kind() { return "posdef_cone"; }
  Eigen::Index dim() const { return dim_; }

  Point basepoint() const { return Point::Identity(dim_, dim_); }
  Isometry identity() const { return Isometry::Identity(dim_, dim_); }

  S distance(const Point& p, const Point& q) const {
    check_point(p);
    check_point(q);
    Eigen::LLT<Mat<S>> llt(symmetrized(p));
    require(llt.info() == Eigen::Success, "posdef_cone: point is not positive definite");
    Mat<S> x = llt.matrixL().solve(symmetrized(q));
    Mat<S> m = llt.matrixL().solve(Mat<S>(x.transpose()));
    return log_eigenvalues(m).norm();
  }
  Point act(const Isometry& g, const Point& p) const {
    check_isometry(g);
    check_point(p);
    return symmetrized(g * p * g.transpose());
  }
  Isometry compose(const Isometry& g, const Isometry& h) const { return g * h; }
  void right_multiply(Isometry& z, const Isometry& g) const { z = z * g; }
  Isometry inverse(const Isometry& g) const {
    check_isometry(g);
    return g.inverse();
  }
  // |g| = sqrt(sum (ln tau_i)^2), tau_i the eigenvalues of g g^T.
  S displacement(const Isometry& g) const {
    return log_eigenvalues(Mat<S>(g * g.transpose())).norm();
  }
  Point orbit_point(const Isometry& g) const { return symmetrized(g * g.transpose()); }

  Boundary boundary(const Mat<S>& h) const {
    using std::abs;
    require(h.rows() == dim_ && h.cols() == dim_, "posdef boundary: dimension mismatch");
    const S scale = h.cwiseAbs().maxCoeff();
    require((h - h.transpose()).cwiseAbs().maxCoeff() <= S(1e-9) * (S(1) + scale),
            "posdef boundary: H must be symmetric");
    require(abs(h.norm() - S(1)) <= S(1e-9), "posdef boundary: H must have unit Frobenius norm");
    return {symmetrized(h)};
  }
  // Busemann function of t -> exp(tH): with H = V diag(h) V^T (h descending)
  // and V^T P V = N D N^T, N unit upper triangular, h(P) = -sum h_i ln D_i.
  S horofunction(const Boundary& xi, const Point& p) const {
    check_point(p);
    require(xi.H.rows() == dim_, "posdef boundary: dimension mismatch");
    auto e = sym_eig(xi.H);
    Mat<S> q = e.vectors.transpose() * p * e.vectors;
    Vec<S> ld = udu_log_diagonal(q);
    return -e.values.dot(ld);
  }
  Point geodesic_point(const Boundary& xi, double t) const {
    require(t >= 0.0, "geodesic_point: t must be nonnegative");
    return sym_exp(Mat<S>(xi.H * S(t)));
  }
  Boundary boundary_toward(const Point& p) const {
    Mat<S> l = sym_log(p);
    const S n = l.norm();
    require(n > S(0), "boundary_toward: point coincides with the basepoint");
    return {l / n};
  }
  double chart_distance(const Boundary& a, const Boundary& b) const {
    return to_double(S((a.H - b.H).norm()));
  }
  Boundary far_boundary(const Boundary& xi) const { return {-xi.H}; }

 private:
  void check_point(const Point& p) const {
    require(p.rows() == dim_ && p.cols() == dim_, "posdef_cone: dimension mismatch");
    require(is_spd(p), "posdef_cone: matrix is not symmetric positive definite");
  }
  void check_isometry(const Isometry& g) const {
    require(g.rows() == dim_ && g.cols() == dim_, "posdef_cone: dimension mismatch");
  }
  Eigen::Index dim_;
};

}  // namespace ergolab

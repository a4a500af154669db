#pragma once

#include <cmath>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/linalg.hpp"

namespace ergolab {

// R^d with the Euclidean norm; isometries are translations.
template <class S = double>
class Euclidean {
 public:
  using Real = S;
  using Point = Vec<S>;
  using Isometry = Vec<S>;
  struct Boundary {
    Vec<S> u;  // unit vector, h_u(z) = -<u, z>
  };

  explicit Euclidean(Eigen::Index dim) : dim_(dim) { require(dim >= 1, "euclidean: dimension must be positive"); }

  static std::string kind() { return "euclidean"; }
  Eigen::Index dim() const { return dim_; }

  Point basepoint() const { return Point::Zero(dim_); }
  Isometry identity() const { return Isometry::Zero(dim_); }

  S distance(const Point& x, const Point& y) const {
    check(x);
    check(y);
    return (x - y).norm();
  }
  Point act(const Isometry& g, const Point& x) const {
    check(g);
    check(x);
    return x + g;
  }
  Isometry compose(const Isometry& g, const Isometry& h) const { return g + h; }
  void right_multiply(Isometry& z, const Isometry& g) const { z += g; }
  Isometry inverse(const Isometry& g) const { return -g; }
  S displacement(const Isometry& g) const { return g.norm(); }
  Point orbit_point(const Isometry& g) const { return g; }

  Boundary boundary(const Vec<S>& u) const {
    check(u);
    using std::abs;
    require(abs(u.norm() - S(1)) <= S(1e-9), "euclidean boundary: direction must be a unit vector");
    return {u};
  }
  S horofunction(const Boundary& xi, const Point& x) const {
    check(xi.u);
    check(x);
    return -xi.u.dot(x);
  }
  Point geodesic_point(const Boundary& xi, double t) const {
    require(t >= 0.0, "geodesic_point: t must be nonnegative");
    return xi.u * S(t);
  }
  Boundary boundary_toward(const Point& x) const {
    const S n = x.norm();
    require(n > S(0), "boundary_toward: point coincides with the basepoint");
    return {x / n};
  }
  double chart_distance(const Boundary& a, const Boundary& b) const {
    return to_double(S((a.u - b.u).norm()));
  }
  Boundary far_boundary(const Boundary& xi) const { return {-xi.u}; }

 private:
  void check(const Vec<S>& v) const {
    if (v.size() != dim_)
      throw Error("euclidean: dimension mismatch (expected " + std::to_string(dim_) + ", got " +
                  std::to_string(v.size()) + ")");
  }
  Eigen::Index dim_;
};

}  // namespace ergolab

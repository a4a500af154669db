#pragma once

#include <cmath>
#include <string>

#include "ergolab/error.hpp"
#include "ergolab/gauge.hpp"

namespace ergolab {

// The line with metric D(|x - y|).  Its horofunction boundary is the single
// function h = 0.
class GaugedLine {
 public:
  using Real = double;
  using Point = double;
  using Isometry = double;
  struct Boundary {};

  explicit GaugedLine(GaugeFunction gauge) : gauge_(std::move(gauge)) {}

  static std::string kind() { return "gauged_line"; }
  const GaugeFunction& gauge() const { return gauge_; }

  Point basepoint() const { return 0.0; }
  Isometry identity() const { return 0.0; }

  double distance(Point x, Point y) const { return gauge_(std::abs(x - y)); }
  Point act(Isometry g, Point x) const { return x + g; }
  Isometry compose(Isometry g, Isometry h) const { return g + h; }
  void right_multiply(Isometry& z, Isometry g) const { z += g; }
  Isometry inverse(Isometry g) const { return -g; }
  double displacement(Isometry g) const { return gauge_(std::abs(g)); }
  Point orbit_point(Isometry g) const { return g; }

  double horofunction(const Boundary&, Point) const { return 0.0; }
  Point geodesic_point(const Boundary&, double) const {
    throw Error("gauged_line: no nontrivial geodesic rays (boundary is h = 0)");
  }
  Boundary boundary_toward(Point) const { return {}; }
  double chart_distance(const Boundary&, const Boundary&) const { return 0.0; }
  Boundary far_boundary(const Boundary&) const {
    throw Error("gauged_line: the boundary is a single point");
  }

 private:
  GaugeFunction gauge_;
};

}  // namespace ergolab

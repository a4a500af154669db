#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "ergolab/bigreal.hpp"
#include "ergolab/error.hpp"

namespace ergolab {

// Minimal complex arithmetic over any real scalar (std::complex is only
// specified for the built-in floating types).
template <class S>
struct Complex {
  S re{0}, im{0};

  Complex() = default;
  Complex(S r, S i = S(0)) : re(std::move(r)), im(std::move(i)) {}

  friend Complex operator+(const Complex& x, const Complex& y) { return {x.re + y.re, x.im + y.im}; }
  friend Complex operator-(const Complex& x, const Complex& y) { return {x.re - y.re, x.im - y.im}; }
  friend Complex operator*(const Complex& x, const Complex& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend Complex operator*(const S& s, const Complex& x) { return {s * x.re, s * x.im}; }
  friend Complex operator/(const Complex& x, const Complex& y) {
    const S n = y.norm2();
    return {(x.re * y.re + x.im * y.im) / n, (x.im * y.re - x.re * y.im) / n};
  }
  Complex conj() const { return {re, -im}; }
  S norm2() const { return re * re + im * im; }
  S abs() const {
    using std::sqrt;
    return sqrt(norm2());
  }
  static Complex polar(const S& r, const S& angle) {
    using std::cos;
    using std::sin;
    return {r * cos(angle), r * sin(angle)};
  }
};

// g(z) = (a z + b) / (conj(b) z + conj(a)) with |a|^2 - |b|^2 = 1.
template <class S>
struct Mobius {
  Complex<S> a{S(1)};
  Complex<S> b{S(0)};

  S det() const { return a.norm2() - b.norm2(); }

  // Hyperbolic translation of the given length whose axis passes through 0
  // in direction angle: it maps 0 to tanh(length/2) e^{i angle}.
  static Mobius translation(const S& length, const S& angle) {
    using std::cosh;
    using std::sinh;
    const S half = length / S(2);
    return {Complex<S>(cosh(half)), Complex<S>::polar(sinh(half), angle)};
  }
  static Mobius rotation(const S& angle) {
    return {Complex<S>::polar(S(1), angle / S(2)), Complex<S>(S(0))};
  }
  // Rescale so that det() == 1 at the current precision.
  Mobius normalized() const {
    using std::sqrt;
    const S d = det();
    require(d > S(0), "mobius: coefficients do not define a disk isometry");
    const S s = S(1) / sqrt(d);
    return {s * a, s * b};
  }
  template <class T>
  Mobius<T> cast() const {
    return Mobius<T>{Complex<T>(T(a.re), T(a.im)), Complex<T>(T(b.re), T(b.im))}.normalized();
  }
};

// Poincare disk with curvature -1.
template <class S = double>
class PoincareDisk {
 public:
  using Real = S;
  using Point = Complex<S>;
  using Isometry = Mobius<S>;
  struct Boundary {
    Complex<S> xi;  // |xi| = 1
  };

  static std::string kind() { return "poincare_disk"; }

  Point basepoint() const { return Point(S(0)); }
  Isometry identity() const { return Isometry{}; }

  S distance(const Point& z, const Point& w) const {
    check(z);
    check(w);
    // 2 atanh(|z - w| / |1 - conj(w) z|) written without cancellation.
    const S num = (Point(S(1)) - w.conj() * z).abs() + (z - w).abs();
    return S(2) * fast_log(num) - fast_log((S(1) - z.norm2()) * (S(1) - w.norm2()));
  }
  Point act(const Isometry& g, const Point& z) const {
    check_isometry(g);
    check(z);
    return (g.a * z + g.b) / (g.b.conj() * z + g.a.conj());
  }
  Isometry compose(const Isometry& g, const Isometry& h) const {
    return {g.a * h.a + g.b * h.b.conj(), g.a * h.b + g.b * h.a.conj()};
  }
  void right_multiply(Isometry& z, const Isometry& g) const { z = compose(z, g); }
  Isometry inverse(const Isometry& g) const { return {g.a.conj(), Complex<S>(S(0)) - g.b}; }
  // 2 ln(|a| + |b|) - ln det, with the ratio |b|/|a| < 1 taken in double.
  S displacement(const Isometry& g) const {
    const S na = g.a.norm2(), nb = g.b.norm2();
    const S lna = fast_log(na);
    const double ratio = std::exp(0.5 * to_double(S(fast_log(nb) - lna)));
    return lna + S(2.0 * std::log1p(ratio)) - fast_log(S(na - nb));
  }
  Point orbit_point(const Isometry& g) const { return g.b / g.a.conj(); }

  Boundary boundary(const Complex<S>& xi) const {
    using std::abs;
    require(abs(xi.abs() - S(1)) <= S(1e-9), "disk boundary: point must lie on the unit circle");
    return {xi};
  }
  S horofunction(const Boundary& xi, const Point& z) const {
    check(z);
    return fast_log((xi.xi - z).norm2()) - fast_log(S(1) - z.norm2());
  }
  Point geodesic_point(const Boundary& xi, double t) const {
    using std::tanh;
    require(t >= 0.0, "geodesic_point: t must be nonnegative");
    // Renormalize at the working precision, which may exceed that of xi
    // (multiplying by S(1) promotes a variable-precision scalar).
    const Complex<S> u(xi.xi.re * S(1), xi.xi.im * S(1));
    return (tanh(S(t) / S(2)) / u.abs()) * u;
  }
  Boundary boundary_toward(const Point& z) const {
    const S r = z.abs();
    require(r > S(0), "boundary_toward: point coincides with the basepoint");
    return {Complex<S>(z.re / r, z.im / r)};
  }
  double chart_distance(const Boundary& x, const Boundary& y) const {
    const double c = to_double(S(x.xi.re * y.xi.re + x.xi.im * y.xi.im));
    const double s = to_double(S(x.xi.im * y.xi.re - x.xi.re * y.xi.im));
    return std::abs(std::atan2(s, c));
  }
  Boundary far_boundary(const Boundary& xi) const { return {Complex<S>(-xi.xi.im, xi.xi.re)}; }

 private:
  static void check(const Point& z) {
    require(z.norm2() < S(1), "poincare_disk: point outside the open unit disk");
  }
  static void check_isometry(const Isometry& g) {
    using std::abs;
    require(abs(g.det() - S(1)) <= S(1e-9), "poincare_disk: Mobius coefficients not normalized");
  }
};

}  // namespace ergolab

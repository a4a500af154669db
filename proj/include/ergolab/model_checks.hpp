#pragma once

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ergolab/rng.hpp"
#include "ergolab/space_model.hpp"

namespace ergolab {

// Random points, isometries and boundary points of unit-scale size for the
// double-precision models.

inline Eigen::VectorXd random_normal_vector(Eigen::Index n, rng::Stream& s, double sd = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = sd * s.normal();
  return v;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index d, rng::Stream& s, double sd = 1.0) {
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = sd * s.normal();
  return a;
}

inline Eigen::MatrixXd random_orthogonal(Eigen::Index d, rng::Stream& s) {
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = s.normal();
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

inline Eigen::VectorXd random_point(const Euclidean<double>& m, rng::Stream& s) {
  return random_normal_vector(m.dim(), s, 3.0);
}
inline Eigen::VectorXd random_isometry(const Euclidean<double>& m, rng::Stream& s) {
  return random_normal_vector(m.dim(), s, 3.0);
}
inline Euclidean<double>::Boundary random_boundary(const Euclidean<double>& m, rng::Stream& s) {
  Eigen::VectorXd u = random_normal_vector(m.dim(), s);
  return m.boundary(u / u.norm());
}

inline double random_point(const GaugedLine&, rng::Stream& s) { return s.uniform(-100.0, 100.0); }
inline double random_isometry(const GaugedLine&, rng::Stream& s) { return s.uniform(-100.0, 100.0); }
inline GaugedLine::Boundary random_boundary(const GaugedLine&, rng::Stream&) { return {}; }

inline Complex<double> random_point(const PoincareDisk<double>&, rng::Stream& s) {
  return Complex<double>::polar(std::tanh(s.uniform(0.0, 6.0) / 2.0),
                                s.uniform(0.0, 2.0 * std::numbers::pi));
}
inline Mobius<double> random_isometry(const PoincareDisk<double>& m, rng::Stream& s) {
  const auto t = Mobius<double>::translation(s.uniform(0.0, 4.0), s.uniform(0.0, 2.0 * std::numbers::pi));
  return m.compose(t, Mobius<double>::rotation(s.uniform(0.0, 2.0 * std::numbers::pi))).normalized();
}
inline PoincareDisk<double>::Boundary random_boundary(const PoincareDisk<double>& m, rng::Stream& s) {
  return m.boundary(Complex<double>::polar(1.0, s.uniform(0.0, 2.0 * std::numbers::pi)));
}

inline Word random_word(int rank, std::size_t max_length, rng::Stream& s) {
  Word w;
  const auto len = s.below(max_length + 1);
  while (w.size() < len) {
    const auto g = static_cast<Letter>(1 + s.below(static_cast<std::uint64_t>(rank)));
    const Letter l = s.below(2) == 0 ? g : static_cast<Letter>(-g);
    if (!w.empty() && w.back() == -l) continue;
    w.push_back(l);
  }
  return w;
}
inline Word random_point(const FreeGroupTree& m, rng::Stream& s) { return random_word(m.rank(), 12, s); }
inline Word random_isometry(const FreeGroupTree& m, rng::Stream& s) { return random_word(m.rank(), 12, s); }
inline End random_boundary(const FreeGroupTree& m, rng::Stream& s) {
  End e;
  e.prefix = random_word(m.rank(), 6, s);
  for (;;) {
    Word t = random_word(m.rank(), 3, s);
    if (t.empty() || t.front() == -t.back()) continue;
    if (!e.prefix.empty() && t.front() == -e.prefix.back()) continue;
    e.tail = t;
    break;
  }
  e.validate(m.rank());
  return e;
}

inline Eigen::MatrixXd random_point(const PosdefCone<double>& m, rng::Stream& s) {
  return sym_exp(random_symmetric(m.dim(), s, 0.8));
}
inline Eigen::MatrixXd random_isometry(const PosdefCone<double>& m, rng::Stream& s) {
  const Eigen::VectorXd sv = random_normal_vector(m.dim(), s, 0.7).array().exp();
  return random_orthogonal(m.dim(), s) * sv.asDiagonal() * random_orthogonal(m.dim(), s);
}
inline PosdefCone<double>::Boundary random_boundary(const PosdefCone<double>& m, rng::Stream& s) {
  const Eigen::MatrixXd h = random_symmetric(m.dim(), s);
  return m.boundary(h / h.norm());
}

// How far apart two representations of the same point are.  The gauged
// line compares coordinates: D is not Lipschitz at 0, so D(rounding error)
// would say nothing about the action.
template <MetricModel M>
double point_gap(const M& m, const typename M::Point& p, const typename M::Point& q) {
  return to_double(typename M::Real(m.distance(p, q)));
}
inline double point_gap(const GaugedLine&, double p, double q) { return std::abs(p - q); }

struct AxiomReport {
  std::size_t cases = 0;
  double symmetry = 0.0;       // max |d(x,y) - d(y,x)|
  double identity = 0.0;       // max d(x,x)
  double triangle = 0.0;       // max d(x,z) - d(x,y) - d(y,z)
  double isometry = 0.0;       // max |d(gx,gy) - d(x,y)|
  double composition = 0.0;    // max gap between g(hx) and (gh)x
  double normalization = 0.0;  // max |h(x0)|
  double lipschitz = 0.0;      // max |h(x) - h(y)| - d(x,y)
  double nonnegative = 0.0;    // max -d(x,y)

  double worst() const {
    return std::max({symmetry, identity, triangle, isometry, composition, normalization,
                     lipschitz, nonnegative});
  }
  bool pass(double tol) const { return worst() <= tol; }
};

// Metric axioms, isometry property and horofunction normalization/Lipschitz
// bounds on random cases.
template <MetricModel M>
AxiomReport metric_suite(const M& m, std::size_t cases, std::uint64_t seed) {
  rng::Stream s(seed);
  AxiomReport r;
  r.cases = cases;
  auto d = [&](const auto& x, const auto& y) { return to_double(typename M::Real(m.distance(x, y))); };
  for (std::size_t c = 0; c < cases; ++c) {
    const auto x = random_point(m, s), y = random_point(m, s), z = random_point(m, s);
    const auto g = random_isometry(m, s), h = random_isometry(m, s);
    const auto xi = random_boundary(m, s);
    const double dxy = d(x, y);
    r.symmetry = std::max(r.symmetry, std::abs(dxy - d(y, x)));
    r.identity = std::max(r.identity, std::abs(d(x, x)));
    r.nonnegative = std::max(r.nonnegative, -dxy);
    r.triangle = std::max(r.triangle, d(x, z) - dxy - d(y, z));
    r.isometry = std::max(r.isometry, std::abs(d(m.act(g, x), m.act(g, y)) - dxy));
    r.composition = std::max(r.composition, point_gap(m, m.act(g, m.act(h, x)), m.act(m.compose(g, h), x)));
    const double h0 = to_double(typename M::Real(m.horofunction(xi, m.basepoint())));
    r.normalization = std::max(r.normalization, std::abs(h0));
    const double hx = to_double(typename M::Real(m.horofunction(xi, x)));
    const double hy = to_double(typename M::Real(m.horofunction(xi, y)));
    r.lipschitz = std::max(r.lipschitz, std::abs(hx - hy) - dxy);
  }
  return r;
}

struct ChartLimitReport {
  std::size_t cases = 0;
  double worst = 0.0;  // max |chart value - numeric limit|
  bool pass(double tol) const { return worst <= tol; }
};

// Closed-form horofunction against the numeric limit of Phi along the ray.
// Random cases are drawn in double and evaluated in the model's own scalar.
template <MetricModel M, MetricModel D>
ChartLimitReport chart_limit_suite(const M& m, const D& sampler, std::size_t cases, std::uint64_t seed,
                                   auto&& to_point, auto&& to_boundary) {
  rng::Stream s(seed);
  ChartLimitReport r;
  r.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto x = to_point(random_point(sampler, s));
    const auto xi = to_boundary(random_boundary(sampler, s));
    const double chart = to_double(typename M::Real(m.horofunction(xi, x)));
    r.worst = std::max(r.worst, std::abs(chart - busemann_limit(m, xi, x)));
  }
  return r;
}

template <MetricModel M>
ChartLimitReport chart_limit_suite(const M& m, std::size_t cases, std::uint64_t seed) {
  auto same = [](const auto& v) { return v; };
  return chart_limit_suite(m, m, cases, seed, same, same);
}

}  // namespace ergolab

#pragma once

#include <algorithm>
#include <concepts>
#include <optional>
#include <type_traits>
#include <string>

#include "ergolab/bigreal.hpp"
#include "ergolab/models/euclidean.hpp"
#include "ergolab/models/free_group.hpp"
#include "ergolab/models/gauged_line.hpp"
#include "ergolab/models/poincare_disk.hpp"
#include "ergolab/models/posdef_cone.hpp"

namespace ergolab {

// Interface shared by the five spaces.  Boundary charts are part of it:
// boundary_toward, chart_distance and far_boundary are what the boundary lab
// needs to estimate and perturb a limiting direction.
template <class M>
concept MetricModel = requires(const M m, typename M::Point x, typename M::Isometry g,
                               typename M::Isometry& gref, typename M::Boundary xi) {
  typename M::Real;
  { M::kind() } -> std::convertible_to<std::string>;
  { m.basepoint() } -> std::convertible_to<typename M::Point>;
  { m.identity() } -> std::convertible_to<typename M::Isometry>;
  { m.distance(x, x) } -> std::convertible_to<typename M::Real>;
  { m.act(g, x) } -> std::convertible_to<typename M::Point>;
  { m.compose(g, g) } -> std::convertible_to<typename M::Isometry>;
  { m.inverse(g) } -> std::convertible_to<typename M::Isometry>;
  { m.displacement(g) } -> std::convertible_to<typename M::Real>;
  { m.orbit_point(g) } -> std::convertible_to<typename M::Point>;
  m.right_multiply(gref, g);
  { m.horofunction(xi, x) } -> std::convertible_to<typename M::Real>;
  { m.geodesic_point(xi, 1.0) } -> std::convertible_to<typename M::Point>;
  { m.boundary_toward(x) } -> std::convertible_to<typename M::Boundary>;
  { m.chart_distance(xi, xi) } -> std::convertible_to<double>;
  { m.far_boundary(xi) } -> std::convertible_to<typename M::Boundary>;
};

// Phi_x(z) = d(x, z) - d(x, x0).
template <MetricModel M>
typename M::Real phi_eval(const M& m, const typename M::Point& x, const typename M::Point& z) {
  return m.distance(x, z) - m.distance(x, m.basepoint());
}

// lim_t Phi_{gamma(t)}(x) along the ray toward xi, by Richardson
// extrapolation of f(t) = d(gamma(t), x) - t at t, 2t, 4t (assumes an
// expansion in powers of 1/t; exponential convergence is unaffected).
// The default t is 1e3 (1 + d(x0, x)).  BigReal models raise the working
// precision for the duration of the call so that exp(4t) stays resolved.
template <MetricModel M>
double busemann_limit(const M& m, const typename M::Boundary& xi, const typename M::Point& x,
                      double t = 0.0) {
  const double r = to_double(typename M::Real(m.distance(m.basepoint(), x)));
  if (t <= 0.0) t = 1e3 * (1.0 + r);
  std::optional<PrecisionScope> scope;
  if constexpr (std::is_same_v<typename M::Real, BigReal>)
    scope.emplace(std::max<unsigned>(bits_for_log_range(8.0 * t + 4.0 * r),
                                     PrecisionScope::current_bits()));
  auto f = [&](double s) {
    return to_double(typename M::Real(phi_eval(m, m.geodesic_point(xi, s), x)));
  };
  const double f1 = f(t), f2 = f(2 * t), f4 = f(4 * t);
  const double r1 = 2 * f2 - f1, r2 = 2 * f4 - f2;
  return (4 * r2 - r1) / 3;
}

static_assert(MetricModel<Euclidean<double>>);
static_assert(MetricModel<GaugedLine>);
static_assert(MetricModel<PoincareDisk<double>>);
static_assert(MetricModel<FreeGroupTree>);
static_assert(MetricModel<PosdefCone<double>>);

}  // namespace ergolab

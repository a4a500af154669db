#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include "ergolab/cocycle.hpp"
#include "ergolab/stats.hpp"

namespace ergolab {

template <MetricModel M>
struct DirectionEstimate {
  typename M::Boundary xi;
  std::size_t fit_depth = 0;
  double residual = 0.0;   // |alpha_hat + h_xi(Z_n x0) / n|
  double alpha_hat = 0.0;  // |Z_n| / n
};

namespace detail {

template <MetricModel M>
typename M::Point point_at(const Trajectory<M>& tr, std::size_t n) {
  if (n == tr.size()) return tr.model.orbit_point(tr.terminal);
  return tr.point(n);
}

template <MetricModel M>
double horo(const Trajectory<M>& tr, const typename M::Boundary& xi, const typename M::Point& p) {
  return to_double(typename M::Real(tr.model.horofunction(xi, p)));
}

// Depths carrying orbit points up to `up_to` (0: the terminal depth, which
// is always included).
template <MetricModel M>
std::vector<std::size_t> report_depths(const Trajectory<M>& tr, std::size_t up_to) {
  if (up_to == 0) up_to = tr.size();
  require(up_to <= tr.size() && (up_to == tr.size() || tr.has_point(up_to)),
          "boundary lab: no orbit point retained at depth " + std::to_string(up_to));
  std::vector<std::size_t> d;
  for (std::size_t k : tr.depths)
    if (k <= up_to) d.push_back(k);
  if (d.empty() || d.back() != up_to) d.push_back(up_to);
  return d;
}

}  // namespace detail

// Chart point read off the orbit point at depth n (default: terminal depth).
template <MetricModel M>
DirectionEstimate<M> estimate_direction(const Trajectory<M>& tr, double drift_threshold = 0.01,
                                        std::size_t n = 0) {
  if constexpr (std::is_same_v<M, GaugedLine>)
    throw Error("estimate_direction: the gauged line has no directional boundary");
  if (n == 0) n = tr.size();
  require(n >= 1 && n <= tr.size(), "estimate_direction: depth outside the trajectory");
  DirectionEstimate<M> est;
  est.fit_depth = n;
  est.alpha_hat = tr.distance(n) / static_cast<double>(n);
  if (!(est.alpha_hat > drift_threshold))
    throw Error("estimate_direction: sublinear regime, no direction (drift " +
                std::to_string(est.alpha_hat) + " <= " + std::to_string(drift_threshold) + ")");
  const auto p = detail::point_at(tr, n);
  est.xi = tr.model.boundary_toward(p);
  est.residual = std::abs(est.alpha_hat + detail::horo(tr, est.xi, p) / static_cast<double>(n));
  return est;
}

struct MainTheoremReport {
  std::vector<std::size_t> depths;
  std::vector<double> a;  // -h(Z_n x0) / n
  std::vector<double> b;  // |Z_n| / n
  double residual = 0.0;  // |a_N - b_N|
  double tolerance = 0.0;
  double trend = 0.0;     // least-squares slope of |a_n - b_n| against n
  bool pass = false;
};

// Series up to depth `up_to` (0: the whole trajectory).  A direction read off
// the terminal point makes the terminal residual vanish by construction, so
// callers estimate xi deeper than they verify.
template <MetricModel M>
MainTheoremReport verify_main_theorem(const Trajectory<M>& tr, const typename M::Boundary& xi,
                                      double stderr_of_b = 0.0, std::size_t up_to = 0) {
  MainTheoremReport r;
  r.depths = detail::report_depths(tr, up_to);
  for (std::size_t n : r.depths) {
    const double nn = static_cast<double>(n);
    r.a.push_back(-detail::horo(tr, xi, detail::point_at(tr, n)) / nn);
    r.b.push_back(tr.distance(n) / nn);
  }
  r.residual = std::abs(r.a.back() - r.b.back());
  r.tolerance = std::max(0.05, 5.0 * stderr_of_b);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(r.depths.size());
  for (std::size_t i = 0; i < r.depths.size(); ++i) {
    const double x = static_cast<double>(r.depths[i]), y = std::abs(r.a[i] - r.b[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  r.trend = den > 0 ? (m * sxy - sx * sy) / den : 0.0;
  r.pass = r.residual <= r.tolerance;
  return r;
}

struct RayReport {
  double alpha_used = 0.0;
  std::vector<std::size_t> depths;
  std::vector<double> error;      // e_n = d(Z_n x0, sigma(alpha n)) / n
  std::vector<double> bound_rhs;  // alpha_n^2 - 2 alpha beta_n + alpha^2 (comparison-triangle bound on e_n^2)
  double slope = 0.0;             // least-squares slope of ln e_n against ln n
  bool bound_ok = true;           // e_n^2 <= rhs + 0.01 at every depth
};

template <MetricModel M>
RayReport ray_error(const Trajectory<M>& tr, const typename M::Boundary& xi, double alpha,
                    std::size_t up_to = 0) {
  if constexpr (std::is_same_v<M, GaugedLine>) throw Error("ray_error: unsupported on the gauged line");
  require(alpha > 0.0, "ray_error: alpha must be positive");
  RayReport r;
  r.alpha_used = alpha;
  r.depths = detail::report_depths(tr, up_to);
  std::vector<double> x;
  for (std::size_t n : r.depths) {
    const double nn = static_cast<double>(n);
    const auto p = detail::point_at(tr, n);
    const auto q = tr.model.geodesic_point(xi, alpha * nn);
    const double e = to_double(typename M::Real(tr.model.distance(p, q))) / nn;
    const double an = tr.distance(n) / nn;
    const double bn = -detail::horo(tr, xi, p) / nn;
    const double rhs = an * an - 2.0 * alpha * bn + alpha * alpha;
    r.error.push_back(e);
    r.bound_rhs.push_back(rhs);
    r.bound_ok = r.bound_ok && e * e <= rhs + 0.01;
    x.push_back(nn);
  }
  r.slope = stats::loglog_slope(x, r.error);
  return r;
}

// Chart distance between the direction estimates at depths n and 2n.  On the
// tree, "stable" means the depth floor(n/4) prefixes agree; elsewhere the
// chart distance must be below 0.1.
struct StabilityReport {
  std::size_t n = 0;
  double chart_distance = 0.0;
  bool stable = false;
};

template <MetricModel M>
StabilityReport direction_stability(const Trajectory<M>& tr, std::size_t n) {
  require(2 * n <= tr.size(), "direction_stability: 2n exceeds the trajectory");
  const auto a = estimate_direction(tr, 0.01, n);
  const auto b = estimate_direction(tr, 0.01, 2 * n);
  StabilityReport r{n, tr.model.chart_distance(a.xi, b.xi), false};
  if constexpr (std::is_same_v<M, FreeGroupTree>)
    r.stable = r.chart_distance <= std::ldexp(1.0, -static_cast<int>(n / 4));
  else
    r.stable = r.chart_distance < 0.1;
  return r;
}

struct BirkhoffResult {
  double value = 0.0;   // sign * alpha_hat
  int sign = 0;         // chart +infinity (h = -z) is +1; 0 when sublinear
  bool sublinear = false;
  double alpha_hat = 0.0;
};

// On the line, the limiting horofunction is h(z) = -z or h(z) = z; picking
// the one that fits the theorem recovers S_n / n together with its sign.
BirkhoffResult birkhoff_from_boundary(const Trajectory<Euclidean<double>>& tr,
                                      double drift_threshold = 0.01);

}  // namespace ergolab

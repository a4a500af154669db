#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ergolab {

// Increasing, subadditive D with D(0) = 0 and D(t)/t nonincreasing to 0.
// Every constructor validates these properties on a probe grid and throws
// Error if one fails, so D(t) = t is rejected.
class GaugeFunction {
 public:
  using Fn = std::function<double(double)>;

  static GaugeFunction power(double p);  // t^p, p in (0, 1)
  static GaugeFunction log1p();          // ln(1 + t)
  // Piecewise-linear through knots starting at (0, 0).  Past the last knot
  // (t_k, D_k) it continues as D_k * sqrt(t / t_k).
  static GaugeFunction table(std::vector<std::pair<double, double>> knots);
  static GaugeFunction table_from_csv(const std::string& path);
  static GaugeFunction custom(std::string name, Fn fn);

  double operator()(double t) const { return fn_(t); }
  const std::string& name() const { return name_; }

 private:
  GaugeFunction(std::string name, Fn fn);
  std::string name_;
  Fn fn_;
};

// Weaker gauge d: increasing, positive, o(t).
struct RawGauge {
  std::string name;
  std::function<double(double)> fn;
};

// Probe grid shared by validation and regularization checks: 0 followed by a
// geometric grid on [1e-3, 1e12].
std::vector<double> gauge_probe_grid(std::size_t points = 241);

// D(t) = sup_{u >= 1} d(u t) / u, computed on a geometric u-grid that is
// refined around the maximizer until the value is stable to 1e-6 relative.
// `grid` is the number of u-points per refinement pass.
GaugeFunction regularize_gauge(const RawGauge& raw, std::size_t grid = 64);

struct RegularizationBounds {
  double worst_lower = 0.0;  // max over grid of d - D (should be <= 0)
  double worst_upper = 0.0;  // max over grid of D - 2d (should be <= 0)
  bool pass = false;
};
RegularizationBounds check_regularization(const RawGauge& raw, const GaugeFunction& D,
                                          const std::vector<double>& grid);

}  // namespace ergolab

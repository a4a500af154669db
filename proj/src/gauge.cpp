#include "ergolab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ergolab/error.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

std::vector<double> gauge_probe_grid(std::size_t points) {
  std::vector<double> g{0.0};
  const double lo = std::log(1e-3), hi = std::log(1e12);
  for (std::size_t i = 0; i < points; ++i)
    g.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1)));
  return g;
}

namespace {

void validate_gauge(const std::string& name, const GaugeFunction::Fn& fn) {
  const std::string who = "gauge '" + name + "': ";
  require(fn(0.0) == 0.0, who + "D(0) must be 0");
  const auto grid = gauge_probe_grid();
  double prev = 0.0;
  double prev_ratio = INFINITY;
  double first_ratio = NAN, last_ratio = NAN;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double t = grid[i];
    const double v = fn(t);
    require(std::isfinite(v), who + "non-finite value at t = " + std::to_string(t));
    require(v > prev, who + "not increasing near t = " + std::to_string(t));
    const double ratio = v / t;
    require(ratio <= prev_ratio * (1.0 + 1e-9),
            who + "D(t)/t increases near t = " + std::to_string(t));
    if (i == 1) first_ratio = ratio;
    last_ratio = ratio;
    prev = v;
    prev_ratio = ratio;
  }
  require(last_ratio <= 0.99 * first_ratio, who + "D(t)/t does not decay (not sublinear)");
  rng::Stream s(0x5eed6a46e5ull);
  for (int i = 0; i < 1000; ++i) {
    const double t = std::exp(s.uniform(std::log(1e-3), std::log(1e6)));
    const double u = std::exp(s.uniform(std::log(1e-3), std::log(1e6)));
    const double lhs = fn(t + u), rhs = fn(t) + fn(u);
    require(lhs <= rhs + 1e-9 * std::max(1.0, rhs),
            who + "subadditivity fails at (" + std::to_string(t) + ", " + std::to_string(u) + ")");
  }
}

}  // namespace

GaugeFunction::GaugeFunction(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {
  validate_gauge(name_, fn_);
}

GaugeFunction GaugeFunction::power(double p) {
  require(p > 0.0 && p < 1.0, "power gauge: exponent must lie in (0, 1)");
  return GaugeFunction("power(" + std::to_string(p) + ")",
                       [p](double t) { return t <= 0.0 ? 0.0 : std::pow(t, p); });
}

GaugeFunction GaugeFunction::log1p() {
  return GaugeFunction("log1p", [](double t) { return std::log1p(std::max(t, 0.0)); });
}

GaugeFunction GaugeFunction::table(std::vector<std::pair<double, double>> knots) {
  require(knots.size() >= 2, "table gauge: need at least two knots");
  require(knots.front().first == 0.0 && knots.front().second == 0.0,
          "table gauge: first knot must be (0, 0)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    require(knots[i].first > knots[i - 1].first, "table gauge: abscissae must increase strictly");
    require(knots[i].second > knots[i - 1].second, "table gauge: values must increase strictly");
  }
  auto fn = [k = std::move(knots)](double t) {
    if (t <= 0.0) return 0.0;
    const auto& [tl, dl] = k.back();
    if (t >= tl) return dl * std::sqrt(t / tl);
    auto it = std::upper_bound(k.begin(), k.end(), t,
                               [](double x, const auto& kn) { return x < kn.first; });
    const auto& [t1, d1] = *it;
    const auto& [t0, d0] = *(it - 1);
    return d0 + (d1 - d0) * (t - t0) / (t1 - t0);
  };
  return GaugeFunction("table", fn);
}

GaugeFunction GaugeFunction::table_from_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "table gauge: cannot open " + path);
  std::vector<std::pair<double, double>> knots;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, d;
    if (!(ls >> t >> d)) {
      if (knots.empty()) continue;  // header row
      throw Error("table gauge: malformed row '" + line + "' in " + path);
    }
    knots.emplace_back(t, d);
  }
  return table(std::move(knots));
}

GaugeFunction GaugeFunction::custom(std::string name, Fn fn) {
  return GaugeFunction(std::move(name), std::move(fn));
}

namespace {

// sup_{u >= 1} d(u t) / u for a single t > 0.
double regularized_value(const RawGauge& raw, double t, std::size_t grid) {
  auto g = [&](double lu) { return raw.fn(std::exp(lu) * t) * std::exp(-lu); };
  // Scan ln u over [0, L]; L covers u t up to 1e15 and at least 12 decades.
  double lo = 0.0;
  double hi = std::max(std::log(1e12), std::log(1e15 / t));
  const std::size_t m = std::max<std::size_t>(grid, 8);
  double best = -INFINITY;
  for (int pass = 0; pass < 60; ++pass) {
    std::size_t arg = 0;
    double pass_best = -INFINITY;
    const double step = (hi - lo) / static_cast<double>(m - 1);
    for (std::size_t k = 0; k < m; ++k) {
      const double v = g(lo + step * static_cast<double>(k));
      if (v > pass_best) { pass_best = v; arg = k; }
    }
    require(pass > 0 || arg + 1 < m,
            "regularize_gauge: supremum not attained on the u-grid (raw gauge not o(t))");
    const bool stable = std::abs(pass_best - best) <= 1e-6 * std::abs(pass_best);
    best = std::max(best, pass_best);
    if (stable) return best;
    const double c = lo + step * static_cast<double>(arg);
    lo = std::max(0.0, c - step);
    hi = c + step;
  }
  throw Error("regularize_gauge: supremum did not stabilize at t = " + std::to_string(t));
}

}  // namespace

GaugeFunction regularize_gauge(const RawGauge& raw, std::size_t grid) {
  const auto probe = gauge_probe_grid();
  const std::string who = "regularize_gauge('" + raw.name + "'): ";
  double prev = -INFINITY;
  for (std::size_t i = 1; i < probe.size(); ++i) {
    const double v = raw.fn(probe[i]);
    require(std::isfinite(v) && v > 0.0, who + "raw gauge must be positive and finite");
    require(v > prev, who + "raw gauge must increase (and diverge) on the probe grid");
    prev = v;
  }
  auto fn = [raw, grid](double t) { return t <= 0.0 ? 0.0 : regularized_value(raw, t, grid); };
  return GaugeFunction::custom("regularized(" + raw.name + ")", fn);
}

RegularizationBounds check_regularization(const RawGauge& raw, const GaugeFunction& D,
                                          const std::vector<double>& grid) {
  RegularizationBounds b{-INFINITY, -INFINITY, false};
  for (double t : grid) {
    if (t <= 0.0) continue;
    const double d = raw.fn(t), v = D(t);
    b.worst_lower = std::max(b.worst_lower, (d - v) / std::max(1.0, d));
    b.worst_upper = std::max(b.worst_upper, (v - 2.0 * d) / std::max(1.0, d));
  }
  b.pass = b.worst_lower <= 1e-9 && b.worst_upper <= 1e-9;
  return b;
}

}  // namespace ergolab
